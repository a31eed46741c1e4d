#include "g3ad/matrix.hpp"

#include <algorithm>
#include <cstdio>

#include "g3ad/errors.hpp"

namespace g3ad {

Matrix Matrix::filled(int rows, int cols, double v) {
    Matrix m(rows, cols);
    m.fill(v);
    return m;
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    Matrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c) throw DimensionError("from_rows: ragged initializer");
        int j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

std::string Matrix::shape_str() const {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%dx%d", rows_, cols_);
    return buf;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

double Matrix::max_abs_diff(const Matrix& other) const {
    if (!same_shape(other)) throw DimensionError("max_abs_diff: shapes " + shape_str() + " vs " + other.shape_str());
    double m = 0.0;
    for (size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::fabs(data_[i] - other.data_[i]));
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

void matmul_accumulate(const Matrix& a, const Matrix& b, Matrix& out) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions disagree, " + a.shape_str() + " * " + b.shape_str());
    if (out.rows() != a.rows() || out.cols() != b.cols())
        throw DimensionError("matmul: output shape " + out.shape_str() + " wanted " + std::to_string(a.rows()) + "x" +
                             std::to_string(b.cols()));
    const int r = a.rows(), k = a.cols(), c = b.cols();
    for (int i = 0; i < r; ++i) {
        double* out_row = out.row(i);
        const double* a_row = a.row(i);
        for (int kk = 0; kk < k; ++kk) {
            const double av = a_row[kk];
            if (av == 0.0) continue;
            const double* b_row = b.row(kk);
            for (int j = 0; j < c; ++j) out_row[j] += av * b_row[j];
        }
    }
}

Matrix matmul_values(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    matmul_accumulate(a, b, out);
    return out;
}

}  // namespace g3ad

#pragma once

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

namespace g3ad {

/// Dense row-major matrix of doubles. The value type underneath every
/// tensor, graph adjacency and parameter in the library.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Matrix zeros(int rows, int cols) { return Matrix(rows, cols); }
    static Matrix filled(int rows, int cols, double v);
    static Matrix identity(int n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(int i) { return data_.data() + static_cast<size_t>(i) * cols_; }
    const double* row(int i) const { return data_.data() + static_cast<size_t>(i) * cols_; }

    bool same_shape(const Matrix& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }
    std::string shape_str() const;

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
    bool all_finite() const;
    double max_abs_diff(const Matrix& other) const;

    Matrix transposed() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// c += a * b, shapes (r,k)x(k,c). Throws DimensionError on mismatch.
void matmul_accumulate(const Matrix& a, const Matrix& b, Matrix& out);
Matrix matmul_values(const Matrix& a, const Matrix& b);

}  // namespace g3ad

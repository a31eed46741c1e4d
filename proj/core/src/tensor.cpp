#include "g3ad/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "g3ad/errors.hpp"

namespace g3ad {

namespace {

Tensor make_node(Matrix value, const char* op, std::vector<Tensor> parents,
                 std::function<void(TensorNode&)> backprop) {
    auto node = std::make_shared<TensorNode>();
    node->value = std::move(value);
    node->op = op;
    bool needs = false;
    for (const auto& p : parents) needs = needs || p->requires_grad;
    node->requires_grad = needs;
    if (needs) {
        node->parents = std::move(parents);
        node->backprop = std::move(backprop);
    }
    return node;
}

void ensure_grad(TensorNode& n) {
    if (!n.grad.same_shape(n.value)) n.grad = Matrix(n.value.rows(), n.value.cols());
}

// Maps an output coordinate back to an operand coordinate under broadcast.
struct BcastIndex {
    int rows, cols;
    double at(const Matrix& m, int i, int j) const { return m(rows == 1 ? 0 : i, cols == 1 ? 0 : j); }
    double& at(Matrix& m, int i, int j) const { return m(rows == 1 ? 0 : i, cols == 1 ? 0 : j); }
};

void check_broadcast(const Matrix& a, const Matrix& b, const char* op) {
    const bool rows_ok = a.rows() == b.rows() || a.rows() == 1 || b.rows() == 1;
    const bool cols_ok = a.cols() == b.cols() || a.cols() == 1 || b.cols() == 1;
    if (!rows_ok || !cols_ok)
        throw DimensionError(std::string(op) + ": shapes " + a.shape_str() + " and " + b.shape_str() +
                             " do not broadcast");
}

enum class BinKind { Add, Sub, Mul, Div };

Tensor binary_op(BinKind kind, const char* name, const Tensor& a, const Tensor& b) {
    check_broadcast(a->value, b->value, name);
    const int r = std::max(a->rows(), b->rows());
    const int c = std::max(a->cols(), b->cols());
    const BcastIndex ia{a->rows(), a->cols()}, ib{b->rows(), b->cols()};
    Matrix out(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            const double x = ia.at(a->value, i, j), y = ib.at(b->value, i, j);
            double v = 0;
            switch (kind) {
                case BinKind::Add: v = x + y; break;
                case BinKind::Sub: v = x - y; break;
                case BinKind::Mul: v = x * y; break;
                case BinKind::Div: v = x / y; break;
            }
            out(i, j) = v;
        }
    return make_node(std::move(out), name, {a, b}, [kind, ia, ib, r, c](TensorNode& self) {
        TensorNode& pa = *self.parents[0];
        TensorNode& pb = *self.parents[1];
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                const double g = self.grad(i, j);
                const double x = ia.at(pa.value, i, j), y = ib.at(pb.value, i, j);
                if (pa.requires_grad) {
                    double da = 0;
                    switch (kind) {
                        case BinKind::Add:
                        case BinKind::Sub: da = g; break;
                        case BinKind::Mul: da = g * y; break;
                        case BinKind::Div: da = g / y; break;
                    }
                    ia.at(pa.grad, i, j) += da;
                }
                if (pb.requires_grad) {
                    double db = 0;
                    switch (kind) {
                        case BinKind::Add: db = g; break;
                        case BinKind::Sub: db = -g; break;
                        case BinKind::Mul: db = g * x; break;
                        case BinKind::Div: db = -g * x / (y * y); break;
                    }
                    ib.at(pb.grad, i, j) += db;
                }
            }
    });
}

// dfdx is (x, y) -> dy/dx; templated so the per-element calls inline.
template <typename F, typename DF>
Tensor unary_op(const char* name, const Tensor& a, F f, DF dfdx) {
    Matrix out(a->rows(), a->cols());
    for (int i = 0; i < a->rows(); ++i)
        for (int j = 0; j < a->cols(); ++j) out(i, j) = f(a->value(i, j));
    return make_node(std::move(out), name, {a}, [dfdx](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        for (int i = 0; i < self.rows(); ++i)
            for (int j = 0; j < self.cols(); ++j)
                p.grad(i, j) += self.grad(i, j) * dfdx(p.value(i, j), self.value(i, j));
    });
}

}  // namespace

Tensor constant(Matrix value) {
    auto node = std::make_shared<TensorNode>();
    node->value = std::move(value);
    node->requires_grad = false;
    return node;
}

Tensor parameter(Matrix value) {
    auto node = std::make_shared<TensorNode>();
    node->value = std::move(value);
    node->requires_grad = true;
    return node;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a->cols() != b->rows())
        throw DimensionError("matmul: inner dimensions disagree, " + a->value.shape_str() + " * " +
                             b->value.shape_str());
    Matrix out = matmul_values(a->value, b->value);
    return make_node(std::move(out), "matmul", {a, b}, [](TensorNode& self) {
        TensorNode& pa = *self.parents[0];
        TensorNode& pb = *self.parents[1];
        const Matrix& g = self.grad;
        if (pa.requires_grad) {
            // dL/da = g * b^T
            const Matrix& bv = pb.value;
            for (int i = 0; i < pa.value.rows(); ++i) {
                const double* g_row = g.row(i);
                double* ga_row = pa.grad.row(i);
                for (int kk = 0; kk < pa.value.cols(); ++kk) {
                    const double* b_row = bv.row(kk);
                    double acc = 0;
                    for (int j = 0; j < g.cols(); ++j) acc += g_row[j] * b_row[j];
                    ga_row[kk] += acc;
                }
            }
        }
        if (pb.requires_grad) {
            // dL/db = a^T * g
            const Matrix& av = pa.value;
            for (int i = 0; i < av.rows(); ++i) {
                const double* g_row = g.row(i);
                const double* a_row = av.row(i);
                for (int kk = 0; kk < pb.value.rows(); ++kk) {
                    const double av_ik = a_row[kk];
                    if (av_ik == 0.0) continue;
                    double* gb_row = pb.grad.row(kk);
                    for (int j = 0; j < g.cols(); ++j) gb_row[j] += av_ik * g_row[j];
                }
            }
        }
    });
}

Tensor transpose(const Tensor& a) {
    return make_node(a->value.transposed(), "transpose", {a}, [](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        for (int i = 0; i < self.rows(); ++i)
            for (int j = 0; j < self.cols(); ++j) p.grad(j, i) += self.grad(i, j);
    });
}

Tensor add(const Tensor& a, const Tensor& b) { return binary_op(BinKind::Add, "add", a, b); }
Tensor sub(const Tensor& a, const Tensor& b) { return binary_op(BinKind::Sub, "sub", a, b); }
Tensor mul(const Tensor& a, const Tensor& b) { return binary_op(BinKind::Mul, "mul", a, b); }
Tensor div(const Tensor& a, const Tensor& b) { return binary_op(BinKind::Div, "div", a, b); }

Tensor scale(const Tensor& a, double c) {
    Matrix out(a->rows(), a->cols());
    for (int i = 0; i < a->rows(); ++i)
        for (int j = 0; j < a->cols(); ++j) out(i, j) = c * a->value(i, j);
    return make_node(std::move(out), "scale", {a}, [c](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        for (int i = 0; i < self.rows(); ++i)
            for (int j = 0; j < self.cols(); ++j) p.grad(i, j) += c * self.grad(i, j);
    });
}

Tensor tanh(const Tensor& a) {
    return unary_op(
        "tanh", a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor leaky_relu(const Tensor& a, double negative_slope) {
    return unary_op(
        "leaky_relu", a, [negative_slope](double x) { return x > 0 ? x : negative_slope * x; },
        [negative_slope](double x, double) { return x > 0 ? 1.0 : negative_slope; });
}

Tensor exp(const Tensor& a) {
    return unary_op(
        "exp", a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
    return unary_op(
        "log", a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Tensor sqrt(const Tensor& a) {
    return unary_op(
        "sqrt", a, [](double x) { return std::sqrt(x); }, [](double, double y) { return 0.5 / y; });
}

Tensor abs(const Tensor& a) {
    return unary_op(
        "abs", a, [](double x) { return std::fabs(x); },
        [](double x, double) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
}

Tensor square(const Tensor& a) {
    return unary_op(
        "square", a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
    if (a->rows() != b->rows())
        throw DimensionError("concat_cols: row counts disagree, " + a->value.shape_str() + " vs " +
                             b->value.shape_str());
    const int ca = a->cols(), cb = b->cols();
    Matrix out(a->rows(), ca + cb);
    for (int i = 0; i < a->rows(); ++i) {
        for (int j = 0; j < ca; ++j) out(i, j) = a->value(i, j);
        for (int j = 0; j < cb; ++j) out(i, ca + j) = b->value(i, j);
    }
    return make_node(std::move(out), "concat_cols", {a, b}, [ca, cb](TensorNode& self) {
        TensorNode& pa = *self.parents[0];
        TensorNode& pb = *self.parents[1];
        for (int i = 0; i < self.rows(); ++i) {
            if (pa.requires_grad)
                for (int j = 0; j < ca; ++j) pa.grad(i, j) += self.grad(i, j);
            if (pb.requires_grad)
                for (int j = 0; j < cb; ++j) pb.grad(i, j) += self.grad(i, ca + j);
        }
    });
}

Tensor slice_cols(const Tensor& a, int col_begin, int col_end) {
    if (col_begin < 0 || col_end > a->cols() || col_begin >= col_end)
        throw DimensionError("slice_cols: range [" + std::to_string(col_begin) + ", " + std::to_string(col_end) +
                             ") invalid for " + a->value.shape_str());
    Matrix out(a->rows(), col_end - col_begin);
    for (int i = 0; i < a->rows(); ++i)
        for (int j = col_begin; j < col_end; ++j) out(i, j - col_begin) = a->value(i, j);
    return make_node(std::move(out), "slice_cols", {a}, [col_begin](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        for (int i = 0; i < self.rows(); ++i)
            for (int j = 0; j < self.cols(); ++j) p.grad(i, col_begin + j) += self.grad(i, j);
    });
}

Tensor sum_all(const Tensor& a) {
    double s = 0;
    for (int i = 0; i < a->rows(); ++i)
        for (int j = 0; j < a->cols(); ++j) s += a->value(i, j);
    Matrix out(1, 1);
    out(0, 0) = s;
    return make_node(std::move(out), "sum_all", {a}, [](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        const double g = self.grad(0, 0);
        for (int i = 0; i < p.value.rows(); ++i)
            for (int j = 0; j < p.value.cols(); ++j) p.grad(i, j) += g;
    });
}

Tensor row_sums(const Tensor& a) {
    Matrix out(a->rows(), 1);
    for (int i = 0; i < a->rows(); ++i) {
        double s = 0;
        for (int j = 0; j < a->cols(); ++j) s += a->value(i, j);
        out(i, 0) = s;
    }
    return make_node(std::move(out), "row_sums", {a}, [](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        for (int i = 0; i < p.value.rows(); ++i) {
            const double g = self.grad(i, 0);
            for (int j = 0; j < p.value.cols(); ++j) p.grad(i, j) += g;
        }
    });
}

Tensor mean_rows(const Tensor& a) {
    const int r = a->rows();
    Matrix out(1, a->cols());
    for (int j = 0; j < a->cols(); ++j) {
        double s = 0;
        for (int i = 0; i < r; ++i) s += a->value(i, j);
        out(0, j) = s / r;
    }
    return make_node(std::move(out), "mean_rows", {a}, [r](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        for (int j = 0; j < p.value.cols(); ++j) {
            const double g = self.grad(0, j) / r;
            for (int i = 0; i < r; ++i) p.grad(i, j) += g;
        }
    });
}

namespace {

Tensor extreme_rows(const char* name, const Tensor& a, bool take_min) {
    const int r = a->rows(), c = a->cols();
    if (r == 0) throw DimensionError(std::string(name) + ": empty input");
    Matrix out(1, c);
    auto arg = std::make_shared<std::vector<int>>(c, 0);
    for (int j = 0; j < c; ++j) {
        double best = a->value(0, j);
        int best_i = 0;
        for (int i = 1; i < r; ++i) {
            const double v = a->value(i, j);
            if (take_min ? v < best : v > best) {
                best = v;
                best_i = i;
            }
        }
        out(0, j) = best;
        (*arg)[j] = best_i;
    }
    return make_node(std::move(out), name, {a}, [arg](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        for (int j = 0; j < self.cols(); ++j) p.grad((*arg)[j], j) += self.grad(0, j);
    });
}

}  // namespace

Tensor min_rows(const Tensor& a) { return extreme_rows("min_rows", a, true); }
Tensor max_rows(const Tensor& a) { return extreme_rows("max_rows", a, false); }

Tensor masked_row_softmax(const Tensor& logits, std::shared_ptr<const Matrix> mask) {
    const int r = logits->rows(), c = logits->cols();
    if (mask->rows() != r || mask->cols() != c)
        throw DimensionError("masked_row_softmax: mask " + mask->shape_str() + " vs logits " +
                             logits->value.shape_str());
    Matrix out(r, c);
    for (int i = 0; i < r; ++i) {
        double row_max = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < c; ++j)
            if ((*mask)(i, j) != 0.0) row_max = std::max(row_max, logits->value(i, j));
        if (!std::isfinite(row_max))
            throw ContractError("masked_row_softmax: row " + std::to_string(i) + " has no active positions");
        double denom = 0;
        for (int j = 0; j < c; ++j)
            if ((*mask)(i, j) != 0.0) denom += std::exp(logits->value(i, j) - row_max);
        for (int j = 0; j < c; ++j)
            out(i, j) = (*mask)(i, j) != 0.0 ? std::exp(logits->value(i, j) - row_max) / denom : 0.0;
    }
    return make_node(std::move(out), "masked_row_softmax", {logits}, [mask](TensorNode& self) {
        TensorNode& p = *self.parents[0];
        if (!p.requires_grad) return;
        for (int i = 0; i < self.rows(); ++i) {
            double dot = 0;
            for (int j = 0; j < self.cols(); ++j)
                if ((*mask)(i, j) != 0.0) dot += self.grad(i, j) * self.value(i, j);
            for (int j = 0; j < self.cols(); ++j)
                if ((*mask)(i, j) != 0.0) p.grad(i, j) += self.value(i, j) * (self.grad(i, j) - dot);
        }
    });
}

void backward(const Tensor& loss) {
    if (!loss) throw ContractError("backward: null loss");
    if (loss->rows() != 1 || loss->cols() != 1)
        throw ContractError("backward: loss must be scalar, got " + loss->value.shape_str());

    // Iterative post-order DFS: children before parents in `order`.
    std::vector<TensorNode*> order;
    std::unordered_set<TensorNode*> visited;
    std::vector<std::pair<TensorNode*, size_t>> stack;
    if (loss->requires_grad) stack.emplace_back(loss.get(), 0);
    visited.insert(loss.get());
    while (!stack.empty()) {
        auto& [node, next_parent] = stack.back();
        if (next_parent < node->parents.size()) {
            TensorNode* parent = node->parents[next_parent].get();
            ++next_parent;
            if (parent->requires_grad && visited.insert(parent).second) stack.emplace_back(parent, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    for (TensorNode* node : order) {
        ensure_grad(*node);
        node->grad.fill(0.0);
    }
    if (!loss->requires_grad) return;
    loss->grad(0, 0) = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        TensorNode* node = *it;
        if (node->backprop) node->backprop(*node);
    }
}

Matrix xavier_init(int rows, int cols, Rng& rng) {
    if (rows < 1 || cols < 1) throw ContractError("xavier_init: dimensions must be positive");
    const double bound = std::sqrt(6.0 / (rows + cols));
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
    return m;
}

}  // namespace g3ad

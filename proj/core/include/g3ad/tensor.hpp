#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "g3ad/matrix.hpp"
#include "g3ad/rng.hpp"

namespace g3ad {

struct TensorNode;

/// Handle to a node in a reverse-mode computation graph. Cheap to copy;
/// the graph stays alive as long as some downstream handle does.
using Tensor = std::shared_ptr<TensorNode>;

struct TensorNode {
    Matrix value;
    Matrix grad;  // sized and populated by backward()
    bool requires_grad = false;
    const char* op = "leaf";  // provenance of the producing operation
    std::vector<Tensor> parents;
    std::function<void(TensorNode&)> backprop;  // accumulates own grad into parents

    int rows() const { return value.rows(); }
    int cols() const { return value.cols(); }
};

/// Leaf that never accumulates gradient (inputs, adjacency, masks).
Tensor constant(Matrix value);
/// Leaf that participates in optimization.
Tensor parameter(Matrix value);

// ---- primitive operations, each with an exact backward rule ----

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// Binary elementwise ops broadcast a 1x1, a 1xC row or an Rx1 column
// operand against an RxC one.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);

Tensor scale(const Tensor& a, double c);
Tensor tanh(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double negative_slope = 0.01);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor sqrt(const Tensor& a);
Tensor abs(const Tensor& a);
Tensor square(const Tensor& a);

Tensor concat_cols(const Tensor& a, const Tensor& b);
Tensor slice_cols(const Tensor& a, int col_begin, int col_end);

Tensor sum_all(const Tensor& a);    // 1x1
Tensor row_sums(const Tensor& a);   // Rx1
Tensor mean_rows(const Tensor& a);  // 1xC, column means
Tensor min_rows(const Tensor& a);   // 1xC, column minima
Tensor max_rows(const Tensor& a);   // 1xC, column maxima

/// Softmax per row restricted to the positions where mask(i,j) != 0;
/// masked-out positions produce 0. Every row of the mask must have at
/// least one active position. Used for attention over neighbor sets.
Tensor masked_row_softmax(const Tensor& logits, std::shared_ptr<const Matrix> mask);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }

/// Populates grad on every requires_grad ancestor of loss. The loss must be
/// scalar (1x1). Grads are reset at the start of each call, so repeated
/// backward passes from the same loss agree.
void backward(const Tensor& loss);

/// Xavier/Glorot uniform init: entries in [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))].
Matrix xavier_init(int rows, int cols, Rng& rng);

}  // namespace g3ad

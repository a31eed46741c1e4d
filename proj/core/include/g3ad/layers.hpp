#pragma once

#include <memory>
#include <string>
#include <vector>

#include "g3ad/adam.hpp"
#include "g3ad/graph.hpp"
#include "g3ad/tensor.hpp"

namespace g3ad {

enum class BackboneKind { Gat, Gcn, Sage, Gin };
enum class Activation { None, LeakyRelu, Tanh };

BackboneKind backbone_from_string(const std::string& name);
std::string to_string(BackboneKind kind);

struct MlpSpec {
    std::vector<int> dims;                // chained layer widths, >= 2 entries
    std::vector<Activation> activations;  // one per layer

    void validate() const;
};

struct MlpParams {
    MlpSpec spec;
    std::vector<Tensor> weights;  // dims[i] x dims[i+1]
    std::vector<Tensor> biases;   // 1 x dims[i+1]

    bool empty() const { return weights.empty(); }
    void append_named(const std::string& prefix, std::vector<NamedParam>& out) const;
};

MlpParams make_mlp(const MlpSpec& spec, Rng& rng);

/// Plain feedforward pass, no neighbor information.
Tensor mlp_forward(const MlpParams& mlp, const Tensor& x, double leaky_slope = 0.01);

/// Per-node aggregation sets shared by the attention and message-passing
/// layers: the neighbor list, optionally including the node itself.
/// Building fails for an isolated node when self-inclusion is off.
struct Aggregation {
    std::vector<std::vector<int>> sets;
    std::shared_ptr<const Matrix> mask;  // n x n binary

    static Aggregation build(const Graph& g, bool include_self);
    Matrix mean_matrix() const;  // rows normalized to sum 1
};

struct GatLayerParams {
    Tensor W;      // in x out
    Tensor a_src;  // out x 1, attention weights on the central node
    Tensor a_dst;  // out x 1, attention weights on the neighbor
};

GatLayerParams make_gat_layer(int in_dim, int out_dim, Rng& rng);

/// e_ij = LeakyReLU(a^T [W x_i || W x_j]) over each node's aggregation
/// set, softmax-normalized per node, then h_i = sum_j alpha_ij W x_j.
Tensor gat_layer(const GatLayerParams& p, const Tensor& x, const Aggregation& agg, double leaky_slope = 0.01);

struct GcnLayerParams {
    Tensor W;  // in x out
};

GcnLayerParams make_gcn_layer(int in_dim, int out_dim, Rng& rng);

/// H_out = LeakyReLU(norm_adj * H_in * W); activation optional so the
/// final layer of a stack can stay linear.
Tensor gcn_layer(const GcnLayerParams& p, const Tensor& norm_adj, const Tensor& h, bool activate = true,
                 double leaky_slope = 0.01);

struct SageLayerParams {
    Tensor W;  // (2*in) x out
};

SageLayerParams make_sage_layer(int in_dim, int out_dim, Rng& rng);

/// h_i = act(W [x_i || mean of the aggregation set]).
Tensor sage_layer(const SageLayerParams& p, const Tensor& x, const Tensor& mean_agg, bool activate = true,
                  double leaky_slope = 0.01);

struct GinLayerParams {
    MlpParams mlp;
    double eps = 0.0;
};

GinLayerParams make_gin_layer(int in_dim, int out_dim, Rng& rng);

/// h_i = MLP((1 + eps) x_i + sum of plain neighbors); the explicit self
/// term keeps isolated nodes defined without a self-loop convention.
Tensor gin_layer(const GinLayerParams& p, const Tensor& x, const Tensor& adjacency, double leaky_slope = 0.01);

/// Constant tensors and aggregation structure derived from one graph,
/// built once per training run and shared by every forward pass.
struct GraphTensors {
    Tensor x;          // n x d attributes
    Tensor adjacency;  // n x n binary
    Tensor norm_adj;   // n x n, D^(-1/2)(A+I)D^(-1/2)
    Tensor mean_agg;   // n x n row-normalized aggregation
    Aggregation agg;

    static GraphTensors build(const Graph& g, bool include_self);
};

/// Two layers of one backbone kind: in -> hidden -> out, LeakyReLU
/// between them, linear after the final layer.
struct EncoderParams {
    BackboneKind kind = BackboneKind::Gat;
    int in_dim = 0, hidden_dim = 0, out_dim = 0;
    std::vector<GatLayerParams> gat;
    std::vector<GcnLayerParams> gcn;
    std::vector<SageLayerParams> sage;
    std::vector<GinLayerParams> gin;

    void append_named(const std::string& prefix, std::vector<NamedParam>& out) const;
};

EncoderParams build_encoder(BackboneKind kind, int in_dim, int hidden_dim, int out_dim, Rng& rng);

Tensor encoder_forward(const EncoderParams& enc, const GraphTensors& gt, double leaky_slope = 0.01);

}  // namespace g3ad

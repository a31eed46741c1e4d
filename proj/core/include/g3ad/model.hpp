#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "g3ad/adam.hpp"
#include "g3ad/errors.hpp"
#include "g3ad/graph.hpp"
#include "g3ad/layers.hpp"

namespace g3ad {

enum class Readout { Mean, Min, Max, Attention };
enum class ArchVariant { Full, Shared, Separated };

Readout readout_from_string(const std::string& name);
std::string to_string(Readout r);
ArchVariant arch_from_string(const std::string& name);
std::string to_string(ArchVariant a);

struct G3adConfig {
    int embed_dim = 64;
    double lambda1 = 0.8;  // attribute vs topology reconstruction balance, in [0, 1]
    double lambda2 = 0.2;  // consistency alignment weight, >= 0
    BackboneKind backbone = BackboneKind::Gat;
    Readout readout = Readout::Mean;
    ArchVariant arch = ArchVariant::Full;
    double cons_floor = 2.718281828459045;  // the additive constant inside the alignment log
    double leaky_slope = 0.01;
    bool include_self = true;  // GAT/SAGE aggregation sets include the node itself
    bool use_attr_recon = true;
    bool use_topo_recon = true;
    bool use_cons_align = true;
    bool use_correlation_constraint = true;

    void validate() const;
};

std::string config_to_json_string(const G3adConfig& cfg);
G3adConfig config_from_json_string(const std::string& text);

/// Every learnable weight of the model. Initialization order is fixed so a
/// seed pins all values regardless of which branches are ablated.
struct ModelParams {
    EncoderParams encoder;        // consistency encoder -> H^c
    MlpParams attr_mlp;           // f_a over X -> H^a
    MlpParams topo_mlp;           // f_t over A's rows -> H^t
    MlpParams cache_attr;         // gate MLP for the attribute cache
    MlpParams cache_topo;         // gate MLP for the topology cache
    GcnLayerParams decoder1;      // attribute decoder, embed -> embed
    GcnLayerParams decoder2;      // attribute decoder, embed -> d, linear
    MlpParams readout_mlp;        // attention readout scorer (only when used)

    std::vector<NamedParam> named() const;
};

ModelParams init_params(int n, int d, const G3adConfig& cfg, std::uint64_t seed);

struct LossBreakdown {
    double attr = 0, topo = 0, cons = 0, cc = 0, total = 0;
};

/// One epoch's outputs. Tensors are null for ablated branches; loss values
/// of ablated terms read 0.
struct ForwardArtifacts {
    Tensor H_a, H_t, H_c;
    Tensor Z_A, Z_T;
    Tensor X_hat;  // n x d
    Tensor A_hat;  // n x n
    Tensor E_g;    // 1 x embed
    Tensor loss_attr, loss_topo, loss_cons, loss_cc, loss_total;
    LossBreakdown losses;
    std::vector<double> scores;
};

/// Absolute Pearson correlation of the flattened entries of two
/// same-shaped matrices; the variance product is guarded by 1e-12 so a
/// constant input yields 0. Symmetric in its arguments, range [0, 1].
Tensor a_cor(const Tensor& p, const Tensor& q);

/// aCor(H_a,H_c) + aCor(H_t,H_c) + aCor(H_a,H_t).
Tensor correlation_constraint(const Tensor& h_a, const Tensor& h_t, const Tensor& h_c);

/// Per-node gates w = Tanh(gate_mlp([h1_i || h2_i])) in R^2, output row
/// i = w0 * h1_i + w1 * h2_i.
Tensor adaptive_cache(const MlpParams& gate_mlp, const Tensor& h1, const Tensor& h2, double leaky_slope = 0.01);

struct AttrRecon {
    Tensor x_hat;
    Tensor loss;  // squared Frobenius distance to X
};
AttrRecon reconstruct_attributes(const Tensor& z_a, const Tensor& norm_adj, const GcnLayerParams& dec1,
                                 const GcnLayerParams& dec2, const Tensor& x_target, double leaky_slope = 0.01);

struct TopoRecon {
    Tensor a_hat;  // Z_T Z_T^T, no squashing
    Tensor loss;   // squared Frobenius distance to A over all n^2 entries
};
TopoRecon reconstruct_topology(const Tensor& z_t, const Tensor& adjacency);

struct ConsAlign {
    Tensor e_g;   // pooled graph summary, 1 x embed
    Tensor loss;  // log(sqrt(sum_i ||h_c_i - e_g||^2) + floor)
};
ConsAlign consistency_alignment(const Tensor& h_c, Readout readout, const MlpParams& readout_mlp,
                                double cons_floor, double leaky_slope = 0.01);

ForwardArtifacts forward(const Graph& g, const GraphTensors& gt, const ModelParams& params, const G3adConfig& cfg,
                         bool with_scores = true);
ForwardArtifacts forward(const Graph& g, const ModelParams& params, const G3adConfig& cfg, bool with_scores = true);

/// Per-node score: lambda1 * attribute error + (1 - lambda1) * adjacency
/// row error + lambda2 * alignment distance. Ablated terms contribute 0;
/// higher means more anomalous.
std::vector<double> anomaly_scores(const Graph& g, const ForwardArtifacts& art, const G3adConfig& cfg);

struct TrainOptions {
    int epochs = 200;
    double lr = 5e-3;
    std::uint64_t seed = 0;
    AdamConfig adam{};  // learning_rate is overwritten by lr
};

struct TrainResult {
    ModelParams params;
    ForwardArtifacts artifacts;  // from a forward pass after the last update
    std::vector<LossBreakdown> history;
};

/// Thrown when the loss or a gradient goes non-finite mid-training; carries
/// the loss history recorded so far.
class TrainDivergence : public TrainingError {
public:
    TrainDivergence(const std::string& what, int epoch, std::vector<LossBreakdown> history)
        : TrainingError(what, epoch), history_(std::move(history)) {}
    const std::vector<LossBreakdown>& history() const { return history_; }

private:
    std::vector<LossBreakdown> history_;
};

/// Full-batch training: encode, constrain, cache, reconstruct, align,
/// combine, backprop, Adam step, once per epoch. Deterministic per seed.
TrainResult train(const Graph& g, const G3adConfig& cfg, const TrainOptions& opts);

}  // namespace g3ad

#include "g3ad/layers.hpp"

#include <algorithm>

#include "g3ad/errors.hpp"

namespace g3ad {

BackboneKind backbone_from_string(const std::string& name) {
    if (name == "gat") return BackboneKind::Gat;
    if (name == "gcn") return BackboneKind::Gcn;
    if (name == "sage") return BackboneKind::Sage;
    if (name == "gin") return BackboneKind::Gin;
    throw ConfigError("unknown backbone '" + name + "' (expected gat|gcn|sage|gin)");
}

std::string to_string(BackboneKind kind) {
    switch (kind) {
        case BackboneKind::Gat: return "gat";
        case BackboneKind::Gcn: return "gcn";
        case BackboneKind::Sage: return "sage";
        case BackboneKind::Gin: return "gin";
    }
    return "?";
}

void MlpSpec::validate() const {
    if (dims.size() < 2) throw ConfigError("mlp: need at least one layer");
    if (activations.size() != dims.size() - 1)
        throw ConfigError("mlp: expected one activation per layer");
    for (int d : dims)
        if (d < 1) throw ConfigError("mlp: layer widths must be positive");
}

void MlpParams::append_named(const std::string& prefix, std::vector<NamedParam>& out) const {
    for (size_t l = 0; l < weights.size(); ++l) {
        out.emplace_back(prefix + ".w" + std::to_string(l), weights[l]);
        out.emplace_back(prefix + ".b" + std::to_string(l), biases[l]);
    }
}

MlpParams make_mlp(const MlpSpec& spec, Rng& rng) {
    spec.validate();
    MlpParams mlp;
    mlp.spec = spec;
    for (size_t l = 0; l + 1 < spec.dims.size(); ++l) {
        mlp.weights.push_back(parameter(xavier_init(spec.dims[l], spec.dims[l + 1], rng)));
        mlp.biases.push_back(parameter(Matrix(1, spec.dims[l + 1])));
    }
    return mlp;
}

namespace {

Tensor apply_activation(const Tensor& h, Activation act, double slope) {
    switch (act) {
        case Activation::None: return h;
        case Activation::LeakyRelu: return leaky_relu(h, slope);
        case Activation::Tanh: return tanh(h);
    }
    return h;
}

}  // namespace

Tensor mlp_forward(const MlpParams& mlp, const Tensor& x, double leaky_slope) {
    if (x->cols() != mlp.spec.dims.front())
        throw DimensionError("mlp_forward: input width " + std::to_string(x->cols()) + " != layer width " +
                             std::to_string(mlp.spec.dims.front()));
    Tensor h = x;
    for (size_t l = 0; l < mlp.weights.size(); ++l) {
        h = add(matmul(h, mlp.weights[l]), mlp.biases[l]);
        h = apply_activation(h, mlp.spec.activations[l], leaky_slope);
    }
    return h;
}

Aggregation Aggregation::build(const Graph& g, bool include_self) {
    Aggregation agg;
    agg.sets.resize(g.n());
    auto mask = std::make_shared<Matrix>(g.n(), g.n());
    for (int i = 0; i < g.n(); ++i) {
        agg.sets[i] = g.neighbors(i);
        if (include_self) {
            agg.sets[i].insert(std::lower_bound(agg.sets[i].begin(), agg.sets[i].end(), i), i);
        } else if (agg.sets[i].empty()) {
            throw ConfigError("node " + std::to_string(i) +
                              " is isolated; enable self-inclusion or connect it");
        }
        for (int j : agg.sets[i]) (*mask)(i, j) = 1.0;
    }
    agg.mask = std::move(mask);
    return agg;
}

Matrix Aggregation::mean_matrix() const {
    const int n = static_cast<int>(sets.size());
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const double w = 1.0 / static_cast<double>(sets[i].size());
        for (int j : sets[i]) m(i, j) = w;
    }
    return m;
}

GatLayerParams make_gat_layer(int in_dim, int out_dim, Rng& rng) {
    GatLayerParams p;
    p.W = parameter(xavier_init(in_dim, out_dim, rng));
    p.a_src = parameter(xavier_init(out_dim, 1, rng));
    p.a_dst = parameter(xavier_init(out_dim, 1, rng));
    return p;
}

Tensor gat_layer(const GatLayerParams& p, const Tensor& x, const Aggregation& agg, double leaky_slope) {
    const Tensor xw = matmul(x, p.W);                  // n x out
    const Tensor src = matmul(xw, p.a_src);            // n x 1
    const Tensor dst = matmul(xw, p.a_dst);            // n x 1
    // e(i,j) = src_i + dst_j via column-against-row broadcast.
    const Tensor e = leaky_relu(add(src, transpose(dst)), leaky_slope);
    const Tensor alpha = masked_row_softmax(e, agg.mask);
    return matmul(alpha, xw);
}

GcnLayerParams make_gcn_layer(int in_dim, int out_dim, Rng& rng) {
    return GcnLayerParams{parameter(xavier_init(in_dim, out_dim, rng))};
}

Tensor gcn_layer(const GcnLayerParams& p, const Tensor& norm_adj, const Tensor& h, bool activate,
                 double leaky_slope) {
    const Tensor out = matmul(matmul(norm_adj, h), p.W);
    return activate ? leaky_relu(out, leaky_slope) : out;
}

SageLayerParams make_sage_layer(int in_dim, int out_dim, Rng& rng) {
    return SageLayerParams{parameter(xavier_init(2 * in_dim, out_dim, rng))};
}

Tensor sage_layer(const SageLayerParams& p, const Tensor& x, const Tensor& mean_agg, bool activate,
                  double leaky_slope) {
    const Tensor out = matmul(concat_cols(x, matmul(mean_agg, x)), p.W);
    return activate ? leaky_relu(out, leaky_slope) : out;
}

GinLayerParams make_gin_layer(int in_dim, int out_dim, Rng& rng) {
    GinLayerParams p;
    p.mlp = make_mlp({{in_dim, out_dim, out_dim}, {Activation::LeakyRelu, Activation::None}}, rng);
    p.eps = 0.0;
    return p;
}

Tensor gin_layer(const GinLayerParams& p, const Tensor& x, const Tensor& adjacency, double leaky_slope) {
    const Tensor combined = add(scale(x, 1.0 + p.eps), matmul(adjacency, x));
    return mlp_forward(p.mlp, combined, leaky_slope);
}

GraphTensors GraphTensors::build(const Graph& g, bool include_self) {
    GraphTensors gt;
    gt.x = constant(g.attributes());
    gt.adjacency = constant(g.adjacency());
    gt.norm_adj = constant(normalized_adjacency(g));
    gt.agg = Aggregation::build(g, include_self);
    gt.mean_agg = constant(gt.agg.mean_matrix());
    return gt;
}

void EncoderParams::append_named(const std::string& prefix, std::vector<NamedParam>& out) const {
    for (size_t l = 0; l < gat.size(); ++l) {
        out.emplace_back(prefix + ".gat" + std::to_string(l) + ".W", gat[l].W);
        out.emplace_back(prefix + ".gat" + std::to_string(l) + ".a_src", gat[l].a_src);
        out.emplace_back(prefix + ".gat" + std::to_string(l) + ".a_dst", gat[l].a_dst);
    }
    for (size_t l = 0; l < gcn.size(); ++l) out.emplace_back(prefix + ".gcn" + std::to_string(l) + ".W", gcn[l].W);
    for (size_t l = 0; l < sage.size(); ++l)
        out.emplace_back(prefix + ".sage" + std::to_string(l) + ".W", sage[l].W);
    for (size_t l = 0; l < gin.size(); ++l)
        gin[l].mlp.append_named(prefix + ".gin" + std::to_string(l), out);
}

EncoderParams build_encoder(BackboneKind kind, int in_dim, int hidden_dim, int out_dim, Rng& rng) {
    if (in_dim < 1 || hidden_dim < 1 || out_dim < 1) throw ConfigError("build_encoder: dims must be positive");
    EncoderParams enc;
    enc.kind = kind;
    enc.in_dim = in_dim;
    enc.hidden_dim = hidden_dim;
    enc.out_dim = out_dim;
    switch (kind) {
        case BackboneKind::Gat:
            enc.gat = {make_gat_layer(in_dim, hidden_dim, rng), make_gat_layer(hidden_dim, out_dim, rng)};
            break;
        case BackboneKind::Gcn:
            enc.gcn = {make_gcn_layer(in_dim, hidden_dim, rng), make_gcn_layer(hidden_dim, out_dim, rng)};
            break;
        case BackboneKind::Sage:
            enc.sage = {make_sage_layer(in_dim, hidden_dim, rng), make_sage_layer(hidden_dim, out_dim, rng)};
            break;
        case BackboneKind::Gin:
            enc.gin = {make_gin_layer(in_dim, hidden_dim, rng), make_gin_layer(hidden_dim, out_dim, rng)};
            break;
    }
    return enc;
}

Tensor encoder_forward(const EncoderParams& enc, const GraphTensors& gt, double leaky_slope) {
    switch (enc.kind) {
        case BackboneKind::Gat: {
            const Tensor h1 = leaky_relu(gat_layer(enc.gat[0], gt.x, gt.agg, leaky_slope), leaky_slope);
            return gat_layer(enc.gat[1], h1, gt.agg, leaky_slope);
        }
        case BackboneKind::Gcn: {
            const Tensor h1 = gcn_layer(enc.gcn[0], gt.norm_adj, gt.x, /*activate=*/true, leaky_slope);
            return gcn_layer(enc.gcn[1], gt.norm_adj, h1, /*activate=*/false, leaky_slope);
        }
        case BackboneKind::Sage: {
            const Tensor h1 = sage_layer(enc.sage[0], gt.x, gt.mean_agg, /*activate=*/true, leaky_slope);
            return sage_layer(enc.sage[1], h1, gt.mean_agg, /*activate=*/false, leaky_slope);
        }
        case BackboneKind::Gin: {
            const Tensor h1 = leaky_relu(gin_layer(enc.gin[0], gt.x, gt.adjacency, leaky_slope), leaky_slope);
            return gin_layer(enc.gin[1], h1, gt.adjacency, leaky_slope);
        }
    }
    throw ConfigError("encoder_forward: unknown backbone");
}

}  // namespace g3ad

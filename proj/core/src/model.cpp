#include "g3ad/model.hpp"

#include <cmath>

#include <json.hpp>

#include "g3ad/errors.hpp"

namespace g3ad {

Readout readout_from_string(const std::string& name) {
    if (name == "mean") return Readout::Mean;
    if (name == "min") return Readout::Min;
    if (name == "max") return Readout::Max;
    if (name == "attention") return Readout::Attention;
    throw ConfigError("unknown readout '" + name + "' (expected mean|min|max|attention)");
}

std::string to_string(Readout r) {
    switch (r) {
        case Readout::Mean: return "mean";
        case Readout::Min: return "min";
        case Readout::Max: return "max";
        case Readout::Attention: return "attention";
    }
    return "?";
}

ArchVariant arch_from_string(const std::string& name) {
    if (name == "full") return ArchVariant::Full;
    if (name == "shared") return ArchVariant::Shared;
    if (name == "separated") return ArchVariant::Separated;
    throw ConfigError("unknown architecture '" + name + "' (expected full|shared|separated)");
}

std::string to_string(ArchVariant a) {
    switch (a) {
        case ArchVariant::Full: return "full";
        case ArchVariant::Shared: return "shared";
        case ArchVariant::Separated: return "separated";
    }
    return "?";
}

void G3adConfig::validate() const {
    if (embed_dim < 1) throw ConfigError("embed_dim must be >= 1");
    if (lambda1 < 0.0 || lambda1 > 1.0) throw ConfigError("lambda1 must lie in [0, 1]");
    if (lambda2 < 0.0) throw ConfigError("lambda2 must be >= 0");
    if (cons_floor <= 0.0) throw ConfigError("cons_floor must be positive");
    const bool cons_active = use_cons_align && arch != ArchVariant::Separated;
    if (!use_attr_recon && !use_topo_recon && !cons_active)
        throw ConfigError("at least one of the attribute, topology or alignment objectives must stay enabled");
}

std::string config_to_json_string(const G3adConfig& cfg) {
    nlohmann::json j;
    j["embed_dim"] = cfg.embed_dim;
    j["lambda1"] = cfg.lambda1;
    j["lambda2"] = cfg.lambda2;
    j["backbone"] = to_string(cfg.backbone);
    j["readout"] = to_string(cfg.readout);
    j["arch"] = to_string(cfg.arch);
    j["cons_floor"] = cfg.cons_floor;
    j["leaky_slope"] = cfg.leaky_slope;
    j["include_self"] = cfg.include_self;
    j["use_attr_recon"] = cfg.use_attr_recon;
    j["use_topo_recon"] = cfg.use_topo_recon;
    j["use_cons_align"] = cfg.use_cons_align;
    j["use_correlation_constraint"] = cfg.use_correlation_constraint;
    return j.dump();
}

G3adConfig config_from_json_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    G3adConfig cfg;
    cfg.embed_dim = j.at("embed_dim").get<int>();
    cfg.lambda1 = j.at("lambda1").get<double>();
    cfg.lambda2 = j.at("lambda2").get<double>();
    cfg.backbone = backbone_from_string(j.at("backbone").get<std::string>());
    cfg.readout = readout_from_string(j.at("readout").get<std::string>());
    cfg.arch = arch_from_string(j.at("arch").get<std::string>());
    cfg.cons_floor = j.at("cons_floor").get<double>();
    cfg.leaky_slope = j.at("leaky_slope").get<double>();
    cfg.include_self = j.at("include_self").get<bool>();
    cfg.use_attr_recon = j.at("use_attr_recon").get<bool>();
    cfg.use_topo_recon = j.at("use_topo_recon").get<bool>();
    cfg.use_cons_align = j.at("use_cons_align").get<bool>();
    cfg.use_correlation_constraint = j.at("use_correlation_constraint").get<bool>();
    return cfg;
}

std::vector<NamedParam> ModelParams::named() const {
    std::vector<NamedParam> out;
    encoder.append_named("encoder", out);
    attr_mlp.append_named("f_a", out);
    topo_mlp.append_named("f_t", out);
    cache_attr.append_named("cache_a", out);
    cache_topo.append_named("cache_t", out);
    out.emplace_back("decoder.w0", decoder1.W);
    out.emplace_back("decoder.w1", decoder2.W);
    if (!readout_mlp.empty()) readout_mlp.append_named("readout", out);
    return out;
}

ModelParams init_params(int n, int d, const G3adConfig& cfg, std::uint64_t seed) {
    if (n < 1 || d < 1) throw ConfigError("init_params: graph dimensions must be positive");
    Rng rng(seed);
    const int k = cfg.embed_dim;
    ModelParams p;
    p.encoder = build_encoder(cfg.backbone, d, k, k, rng);
    p.attr_mlp = make_mlp({{d, k, k}, {Activation::LeakyRelu, Activation::None}}, rng);
    p.topo_mlp = make_mlp({{n, k, k}, {Activation::LeakyRelu, Activation::None}}, rng);
    p.cache_attr = make_mlp({{2 * k, 2}, {Activation::None}}, rng);
    p.cache_topo = make_mlp({{2 * k, 2}, {Activation::None}}, rng);
    p.decoder1 = make_gcn_layer(k, k, rng);
    p.decoder2 = make_gcn_layer(k, d, rng);
    if (cfg.readout == Readout::Attention)
        p.readout_mlp = make_mlp({{k, 1}, {Activation::None}}, rng);
    return p;
}

Tensor a_cor(const Tensor& p, const Tensor& q) {
    if (!p->value.same_shape(q->value))
        throw DimensionError("a_cor: shapes " + p->value.shape_str() + " vs " + q->value.shape_str());
    const double count = static_cast<double>(p->value.size());
    if (count < 2) throw ContractError("a_cor: need at least 2 entries");
    constexpr double kVarGuard = 1e-12;

    const Tensor p_mean = scale(sum_all(p), 1.0 / count);
    const Tensor q_mean = scale(sum_all(q), 1.0 / count);
    const Tensor pc = sub(p, p_mean);
    const Tensor qc = sub(q, q_mean);
    const Tensor cov = scale(sum_all(mul(pc, qc)), 1.0 / count);
    const Tensor var_p = scale(sum_all(square(pc)), 1.0 / count);
    const Tensor var_q = scale(sum_all(square(qc)), 1.0 / count);
    const Tensor denom = sqrt(add(mul(var_p, var_q), constant(Matrix::filled(1, 1, kVarGuard))));
    return abs(div(cov, denom));
}

Tensor correlation_constraint(const Tensor& h_a, const Tensor& h_t, const Tensor& h_c) {
    return add(add(a_cor(h_a, h_c), a_cor(h_t, h_c)), a_cor(h_a, h_t));
}

Tensor adaptive_cache(const MlpParams& gate_mlp, const Tensor& h1, const Tensor& h2, double leaky_slope) {
    if (!h1->value.same_shape(h2->value))
        throw DimensionError("adaptive_cache: shapes " + h1->value.shape_str() + " vs " + h2->value.shape_str());
    const Tensor gates = tanh(mlp_forward(gate_mlp, concat_cols(h1, h2), leaky_slope));  // n x 2
    const Tensor w1 = slice_cols(gates, 0, 1);
    const Tensor w2 = slice_cols(gates, 1, 2);
    return add(mul(w1, h1), mul(w2, h2));
}

AttrRecon reconstruct_attributes(const Tensor& z_a, const Tensor& norm_adj, const GcnLayerParams& dec1,
                                 const GcnLayerParams& dec2, const Tensor& x_target, double leaky_slope) {
    const Tensor hidden = gcn_layer(dec1, norm_adj, z_a, /*activate=*/true, leaky_slope);
    const Tensor x_hat = gcn_layer(dec2, norm_adj, hidden, /*activate=*/false, leaky_slope);
    if (x_hat->cols() != x_target->cols())
        throw DimensionError("reconstruct_attributes: decoder output width " + std::to_string(x_hat->cols()) +
                             " != attribute width " + std::to_string(x_target->cols()));
    return {x_hat, sum_all(square(sub(x_target, x_hat)))};
}

TopoRecon reconstruct_topology(const Tensor& z_t, const Tensor& adjacency) {
    const Tensor a_hat = matmul(z_t, transpose(z_t));
    return {a_hat, sum_all(square(sub(adjacency, a_hat)))};
}

ConsAlign consistency_alignment(const Tensor& h_c, Readout readout, const MlpParams& readout_mlp,
                                double cons_floor, double leaky_slope) {
    Tensor e_g;
    switch (readout) {
        case Readout::Mean: e_g = mean_rows(h_c); break;
        case Readout::Min: e_g = min_rows(h_c); break;
        case Readout::Max: e_g = max_rows(h_c); break;
        case Readout::Attention: {
            if (readout_mlp.empty()) throw ConfigError("attention readout selected but no scorer parameters");
            const Tensor logits = transpose(mlp_forward(readout_mlp, h_c, leaky_slope));  // 1 x n
            auto full = std::make_shared<Matrix>(Matrix::filled(1, h_c->rows(), 1.0));
            const Tensor weights = masked_row_softmax(logits, full);
            e_g = matmul(weights, h_c);
            break;
        }
    }
    const Tensor spread = sum_all(square(sub(h_c, e_g)));
    const Tensor loss = log(add(sqrt(spread), constant(Matrix::filled(1, 1, cons_floor))));
    return {e_g, loss};
}

ForwardArtifacts forward(const Graph& g, const GraphTensors& gt, const ModelParams& params, const G3adConfig& cfg,
                         bool with_scores) {
    cfg.validate();
    ForwardArtifacts art;

    Tensor h_c;
    if (cfg.arch != ArchVariant::Separated) h_c = encoder_forward(params.encoder, gt, cfg.leaky_slope);
    Tensor h_a, h_t;
    if (cfg.arch == ArchVariant::Shared) {
        h_a = h_c;
        h_t = h_c;
    } else {
        h_a = mlp_forward(params.attr_mlp, gt.x, cfg.leaky_slope);
        h_t = mlp_forward(params.topo_mlp, gt.adjacency, cfg.leaky_slope);
    }
    art.H_a = h_a;
    art.H_t = h_t;
    art.H_c = h_c;

    if (cfg.use_correlation_constraint) {
        art.loss_cc = cfg.arch == ArchVariant::Separated ? a_cor(h_a, h_t)
                                                         : correlation_constraint(h_a, h_t, h_c);
    }

    if (cfg.use_attr_recon) {
        art.Z_A = cfg.arch == ArchVariant::Separated
                      ? h_a
                      : adaptive_cache(params.cache_attr, h_a, h_c, cfg.leaky_slope);
        const AttrRecon rec =
            reconstruct_attributes(art.Z_A, gt.norm_adj, params.decoder1, params.decoder2, gt.x, cfg.leaky_slope);
        art.X_hat = rec.x_hat;
        art.loss_attr = rec.loss;
    }

    if (cfg.use_topo_recon) {
        art.Z_T = cfg.arch == ArchVariant::Separated
                      ? h_t
                      : adaptive_cache(params.cache_topo, h_t, h_c, cfg.leaky_slope);
        const TopoRecon rec = reconstruct_topology(art.Z_T, gt.adjacency);
        art.A_hat = rec.a_hat;
        art.loss_topo = rec.loss;
    }

    if (cfg.use_cons_align && cfg.arch != ArchVariant::Separated) {
        const ConsAlign ca =
            consistency_alignment(h_c, cfg.readout, params.readout_mlp, cfg.cons_floor, cfg.leaky_slope);
        art.E_g = ca.e_g;
        art.loss_cons = ca.loss;
    }

    Tensor total;
    auto accumulate = [&total](const Tensor& term, double weight) {
        const Tensor weighted = scale(term, weight);
        total = total ? add(total, weighted) : weighted;
    };
    if (art.loss_attr) accumulate(art.loss_attr, cfg.lambda1);
    if (art.loss_topo) accumulate(art.loss_topo, 1.0 - cfg.lambda1);
    if (art.loss_cons) accumulate(art.loss_cons, cfg.lambda2);
    if (art.loss_cc) total = total ? add(total, art.loss_cc) : art.loss_cc;
    if (!total) total = constant(Matrix(1, 1));
    art.loss_total = total;

    art.losses.attr = art.loss_attr ? art.loss_attr->value(0, 0) : 0.0;
    art.losses.topo = art.loss_topo ? art.loss_topo->value(0, 0) : 0.0;
    art.losses.cons = art.loss_cons ? art.loss_cons->value(0, 0) : 0.0;
    art.losses.cc = art.loss_cc ? art.loss_cc->value(0, 0) : 0.0;
    art.losses.total = art.loss_total->value(0, 0);

    if (with_scores) art.scores = anomaly_scores(g, art, cfg);
    return art;
}

ForwardArtifacts forward(const Graph& g, const ModelParams& params, const G3adConfig& cfg, bool with_scores) {
    const GraphTensors gt = GraphTensors::build(g, cfg.include_self);
    return forward(g, gt, params, cfg, with_scores);
}

std::vector<double> anomaly_scores(const Graph& g, const ForwardArtifacts& art, const G3adConfig& cfg) {
    const int n = g.n();
    std::vector<double> scores(n, 0.0);
    if (cfg.use_attr_recon && art.X_hat) {
        const Matrix& x = g.attributes();
        const Matrix& xh = art.X_hat->value;
        for (int i = 0; i < n; ++i) {
            double err = 0;
            for (int j = 0; j < g.d(); ++j) {
                const double diff = x(i, j) - xh(i, j);
                err += diff * diff;
            }
            scores[i] += cfg.lambda1 * err;
        }
    }
    if (cfg.use_topo_recon && art.A_hat) {
        const Matrix& a = g.adjacency();
        const Matrix& ah = art.A_hat->value;
        for (int i = 0; i < n; ++i) {
            double err = 0;
            for (int j = 0; j < n; ++j) {
                const double diff = a(i, j) - ah(i, j);
                err += diff * diff;
            }
            scores[i] += (1.0 - cfg.lambda1) * err;
        }
    }
    if (cfg.use_cons_align && art.E_g && art.H_c) {
        const Matrix& hc = art.H_c->value;
        const Matrix& eg = art.E_g->value;
        for (int i = 0; i < n; ++i) {
            double dist = 0;
            for (int j = 0; j < hc.cols(); ++j) {
                const double diff = hc(i, j) - eg(0, j);
                dist += diff * diff;
            }
            scores[i] += cfg.lambda2 * std::log(std::sqrt(dist) + cfg.cons_floor);
        }
    }
    return scores;
}

TrainResult train(const Graph& g, const G3adConfig& cfg, const TrainOptions& opts) {
    cfg.validate();
    if (opts.epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (g.n() < 2) throw ConfigError("train: need at least two nodes");

    ModelParams params = init_params(g.n(), g.d(), cfg, opts.seed);
    const GraphTensors gt = GraphTensors::build(g, cfg.include_self);
    const std::vector<NamedParam> named = params.named();
    AdamConfig adam_cfg = opts.adam;
    adam_cfg.learning_rate = opts.lr;
    AdamState adam(named, adam_cfg);

    std::vector<LossBreakdown> history;
    history.reserve(opts.epochs);
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        const ForwardArtifacts art = forward(g, gt, params, cfg, /*with_scores=*/false);
        if (!std::isfinite(art.losses.total))
            throw TrainDivergence("non-finite loss at epoch " + std::to_string(epoch), epoch, history);
        history.push_back(art.losses);
        backward(art.loss_total);
        // Parameters outside the enabled branches never appear in the graph;
        // they carry a zero gradient so Adam leaves them untouched.
        for (const auto& [name, p] : named)
            if (!p->grad.same_shape(p->value)) p->grad = Matrix(p->rows(), p->cols());
        try {
            adam.step(named);
        } catch (const TrainingError& err) {
            throw TrainDivergence(std::string(err.what()) + " at epoch " + std::to_string(epoch), epoch, history);
        }
    }

    TrainResult result;
    result.artifacts = forward(g, gt, params, cfg, /*with_scores=*/true);
    result.params = std::move(params);
    result.history = std::move(history);
    return result;
}

}  // namespace g3ad

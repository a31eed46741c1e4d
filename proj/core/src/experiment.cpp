#include "g3ad/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "g3ad/errors.hpp"
#include "g3ad/metrics.hpp"

namespace g3ad {

namespace {

void mean_std(const std::vector<double>& xs, double& mean, double& std_out) {
    mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());  // population std: one run -> 0
    std_out = std::sqrt(var);
}

// Runs tasks[0..count) across worker threads, preserving index order of
// results; the first exception wins and is rethrown after join.
template <typename Fn>
void parallel_for(int count, int max_workers, Fn&& task) {
    int workers = max_workers > 0 ? max_workers : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentSummary run_protocol(const Graph& g, const std::vector<int>& labels, const G3adConfig& cfg,
                               const TrainOptions& opts, const std::vector<std::uint64_t>& seeds,
                               int max_workers) {
    if (seeds.empty()) throw ConfigError("run_protocol: need at least one seed");
    if (static_cast<int>(labels.size()) != g.n())
        throw ConfigError("run_protocol: labels length does not match the graph");

    ExperimentSummary summary;
    summary.config = cfg;
    summary.options = opts;
    summary.runs.resize(seeds.size());

    parallel_for(static_cast<int>(seeds.size()), max_workers, [&](int i) {
        TrainOptions run_opts = opts;
        run_opts.seed = seeds[i];
        const auto start = std::chrono::steady_clock::now();
        TrainResult result;
        try {
            result = train(g, cfg, run_opts);
        } catch (const TrainingError& err) {
            throw TrainingError("seed " + std::to_string(seeds[i]) + ": " + err.what(), err.epoch());
        }
        const auto stop = std::chrono::steady_clock::now();
        RunResult& run = summary.runs[i];
        run.seed = seeds[i];
        run.auc = roc_auc(result.artifacts.scores, labels);
        run.ap = average_precision(result.artifacts.scores, labels);
        run.history = std::move(result.history);
        run.wall_seconds = std::chrono::duration<double>(stop - start).count();
    });

    std::vector<double> aucs, aps;
    for (const auto& run : summary.runs) {
        aucs.push_back(run.auc);
        aps.push_back(run.ap);
    }
    mean_std(aucs, summary.auc_mean, summary.auc_std);
    mean_std(aps, summary.ap_mean, summary.ap_std);
    return summary;
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "ablation") return SweepAxis::Ablation;
    if (name == "backbone") return SweepAxis::Backbone;
    if (name == "readout") return SweepAxis::Readout;
    if (name == "lambda-grid") return SweepAxis::LambdaGrid;
    throw ConfigError("unknown sweep axis '" + name + "' (expected ablation|backbone|readout|lambda-grid)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Ablation: return "ablation";
        case SweepAxis::Backbone: return "backbone";
        case SweepAxis::Readout: return "readout";
        case SweepAxis::LambdaGrid: return "lambda-grid";
    }
    return "?";
}

std::vector<SweepRow> sweep(const Graph& g, const std::vector<int>& labels, const G3adConfig& base_cfg,
                            const TrainOptions& opts, SweepAxis axis, const std::vector<std::uint64_t>& seeds,
                            int max_workers) {
    auto eval_variant = [&](const std::string& name, const G3adConfig& cfg) -> SweepRow {
        return {name, run_protocol(g, labels, cfg, opts, seeds, max_workers)};
    };

    std::vector<SweepRow> rows;
    switch (axis) {
        case SweepAxis::Ablation: {
            struct Variant {
                const char* name;
                bool ar, tr, ca;
            };
            const Variant variants[] = {
                {"full", true, true, true},        {"wo_ar", false, true, true},  {"wo_tr", true, false, true},
                {"wo_ca", true, true, false},      {"wo_ar_ca", false, true, false},
                {"wo_tr_ca", true, false, false},  {"wo_ar_tr", false, false, true},
            };
            for (const auto& v : variants) {
                G3adConfig cfg = base_cfg;
                cfg.use_attr_recon = v.ar;
                cfg.use_topo_recon = v.tr;
                cfg.use_cons_align = v.ca;
                rows.push_back(eval_variant(v.name, cfg));
            }
            break;
        }
        case SweepAxis::Backbone: {
            for (BackboneKind kind :
                 {BackboneKind::Gcn, BackboneKind::Gat, BackboneKind::Sage, BackboneKind::Gin}) {
                G3adConfig cfg = base_cfg;
                cfg.backbone = kind;
                rows.push_back(eval_variant(to_string(kind), cfg));
            }
            break;
        }
        case SweepAxis::Readout: {
            for (Readout r : {Readout::Mean, Readout::Min, Readout::Max, Readout::Attention}) {
                G3adConfig cfg = base_cfg;
                cfg.readout = r;
                rows.push_back(eval_variant(to_string(r), cfg));
            }
            break;
        }
        case SweepAxis::LambdaGrid: {
            // Tune lambda1 on a [0, 1] grid first, then lambda2 at the best lambda1.
            const double lambda1_grid[] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
            double best_lambda1 = base_cfg.lambda1;
            double best_auc = -1;
            for (double l1 : lambda1_grid) {
                G3adConfig cfg = base_cfg;
                cfg.lambda1 = l1;
                char name[48];
                std::snprintf(name, sizeof(name), "lambda1=%.1f", l1);
                rows.push_back(eval_variant(name, cfg));
                if (rows.back().summary.auc_mean > best_auc) {
                    best_auc = rows.back().summary.auc_mean;
                    best_lambda1 = l1;
                }
            }
            const double lambda2_grid[] = {0.0, 0.1, 0.2, 0.5, 1.0};
            for (double l2 : lambda2_grid) {
                G3adConfig cfg = base_cfg;
                cfg.lambda1 = best_lambda1;
                cfg.lambda2 = l2;
                char name[64];
                std::snprintf(name, sizeof(name), "lambda1=%.1f,lambda2=%.1f", best_lambda1, l2);
                rows.push_back(eval_variant(name, cfg));
            }
            break;
        }
    }
    if (rows.empty()) throw ConfigError("sweep produced no variants");
    return rows;
}

std::string sweep_markdown(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "| variant | auc | ap |\n|---|---|---|\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "| %s | %.4f ± %.4f | %.4f ± %.4f |\n", row.variant.c_str(),
                      row.summary.auc_mean, row.summary.auc_std, row.summary.ap_mean, row.summary.ap_std);
        out << buf;
    }
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "variant,auc_mean,auc_std,ap_mean,ap_std\n";
    for (const auto& row : rows)
        out << row.variant << ',' << format_g(row.summary.auc_mean) << ',' << format_g(row.summary.auc_std) << ','
            << format_g(row.summary.ap_mean) << ',' << format_g(row.summary.ap_std) << '\n';
    return out.str();
}

std::string runs_csv(const ExperimentSummary& summary) {
    std::ostringstream out;
    out << "seed,auc,ap,wall_seconds\n";
    for (const auto& run : summary.runs)
        out << run.seed << ',' << format_g(run.auc) << ',' << format_g(run.ap) << ',' << format_g(run.wall_seconds)
            << '\n';
    return out.str();
}

std::string metrics_json(const ExperimentSummary& summary) {
    nlohmann::json j;
    j["auc"] = summary.auc_mean;
    j["ap"] = summary.ap_mean;
    if (summary.runs.size() > 1) {
        j["auc_std"] = summary.auc_std;
        j["ap_std"] = summary.ap_std;
    }
    return j.dump(2);
}

}  // namespace g3ad

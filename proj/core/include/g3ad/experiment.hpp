#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "g3ad/graph.hpp"
#include "g3ad/model.hpp"

namespace g3ad {

struct RunResult {
    std::uint64_t seed = 0;
    double auc = 0;
    double ap = 0;
    std::vector<LossBreakdown> history;
    double wall_seconds = 0;
};

/// Mean and population standard deviation of AUC/AP over seeds, plus the
/// configuration the runs were produced with.
struct ExperimentSummary {
    double auc_mean = 0, auc_std = 0;
    double ap_mean = 0, ap_std = 0;
    std::vector<RunResult> runs;
    G3adConfig config;
    TrainOptions options;
};

/// Trains once per seed (in parallel up to max_workers; 0 means hardware
/// concurrency) and aggregates. Training errors are rethrown annotated
/// with the failing seed.
ExperimentSummary run_protocol(const Graph& g, const std::vector<int>& labels, const G3adConfig& cfg,
                               const TrainOptions& opts, const std::vector<std::uint64_t>& seeds,
                               int max_workers = 0);

enum class SweepAxis { Ablation, Backbone, Readout, LambdaGrid };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepRow {
    std::string variant;
    ExperimentSummary summary;
};

/// One summary per variant along the chosen axis. The ablation axis yields
/// the seven-variant table (full model, three single removals, three
/// pairwise removals); backbone and readout enumerate their kinds; the
/// lambda grid tunes lambda1 first, then lambda2 at the best lambda1.
std::vector<SweepRow> sweep(const Graph& g, const std::vector<int>& labels, const G3adConfig& base_cfg,
                            const TrainOptions& opts, SweepAxis axis, const std::vector<std::uint64_t>& seeds,
                            int max_workers = 0);

std::string sweep_markdown(const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// One CSV row per run: seed, auc, ap, wall_seconds.
std::string runs_csv(const ExperimentSummary& summary);

/// {"auc": ..., "ap": ...} with auc_std/ap_std added for multi-run summaries.
std::string metrics_json(const ExperimentSummary& summary);

}  // namespace g3ad

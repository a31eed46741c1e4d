#pragma once

#include <string>
#include <vector>

#include "g3ad/model.hpp"

namespace g3ad {

/// Score histogram over equal-width bins spanning [min, max]. With labels,
/// two series (normal, anomaly) with their means; without, a single series.
struct ScoreHistogram {
    double lo = 0, hi = 0;
    int bins = 0;
    std::vector<long> normal_counts;   // or all scores when unlabeled
    std::vector<long> anomaly_counts;  // empty when unlabeled
    double normal_mean = 0;
    double anomaly_mean = 0;
    bool labeled = false;
};

ScoreHistogram score_histogram(const std::vector<double>& scores, const std::vector<int>& labels, int bins);

/// bin_lo,bin_hi,normal_count[,anomaly_count]
std::string histogram_csv(const ScoreHistogram& h);

/// Hand-rolled SVG: one bar series per class in distinct colors plus a
/// dashed vertical mean line for each.
std::string histogram_svg(const ScoreHistogram& h);

/// Per-component loss curves over epochs as SVG polylines.
std::string loss_curve_svg(const std::vector<LossBreakdown>& history);

}  // namespace g3ad

#pragma once

#include <span>
#include <vector>

namespace g3ad {

/// Probability that a uniformly random positive outranks a uniformly
/// random negative, ties counted half. Exact rank-statistic computation.
/// Requires at least one label of each class.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Step-interpolated average precision over the score-descending ranking;
/// equal scores are ordered by ascending index. Requires a positive.
double average_precision(std::span<const double> scores, std::span<const int> labels);

}  // namespace g3ad

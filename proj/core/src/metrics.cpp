#include "g3ad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "g3ad/errors.hpp"

namespace g3ad {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw MetricError("scores and labels differ in length: " + std::to_string(scores.size()) + " vs " +
                          std::to_string(labels.size()));
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw MetricError("label at index " + std::to_string(i) + " not 0/1");
        if (!std::isfinite(scores[i])) throw MetricError("non-finite score at index " + std::to_string(i));
    }
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    check_inputs(scores, labels);
    long num_pos = 0, num_neg = 0;
    for (int y : labels) (y == 1 ? num_pos : num_neg) += 1;
    if (num_pos == 0 || num_neg == 0) throw MetricError("roc_auc needs both classes present");

    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    // Walk tie groups in ascending score order; every positive beats the
    // negatives strictly below it and half-ties with those in its group.
    double wins = 0, ties = 0;
    long negatives_below = 0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        long group_pos = 0, group_neg = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == 1 ? group_pos : group_neg) += 1;
            ++j;
        }
        wins += static_cast<double>(group_pos) * static_cast<double>(negatives_below);
        ties += static_cast<double>(group_pos) * static_cast<double>(group_neg);
        negatives_below += group_neg;
        i = j;
    }
    return (wins + 0.5 * ties) / (static_cast<double>(num_pos) * static_cast<double>(num_neg));
}

double average_precision(std::span<const double> scores, std::span<const int> labels) {
    check_inputs(scores, labels);
    long num_pos = 0;
    for (int y : labels) num_pos += y;
    if (num_pos == 0) throw MetricError("average_precision needs at least one positive");

    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    double ap = 0;
    long seen_pos = 0;
    for (size_t rank = 0; rank < order.size(); ++rank) {
        if (labels[order[rank]] == 1) {
            ++seen_pos;
            const double precision = static_cast<double>(seen_pos) / static_cast<double>(rank + 1);
            ap += precision / static_cast<double>(num_pos);  // recall step of 1/num_pos
        }
    }
    return ap;
}

}  // namespace g3ad

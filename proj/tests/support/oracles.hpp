#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "g3ad/rng.hpp"

namespace test_support {

// O(n^2) pairwise comparison: wins plus half-ties over positive x negative
// pairs. Independent of the rank-statistic implementation.
inline double auc_pairwise_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    double credit = 0;
    long pairs = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j])
                credit += 1.0;
            else if (scores[i] == scores[j])
                credit += 0.5;
        }
    }
    return credit / static_cast<double>(pairs);
}

// Explicit precision/recall walk down the ranking, summing (R_k - R_{k-1}) P_k.
inline double ap_walk_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    long total_pos = 0;
    for (int y : labels) total_pos += y;
    double ap = 0, recall_prev = 0;
    long tp = 0;
    for (size_t k = 1; k <= order.size(); ++k) {
        if (labels[order[k - 1]] == 1) ++tp;
        const double precision = static_cast<double>(tp) / static_cast<double>(k);
        const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
        ap += (recall - recall_prev) * precision;
        recall_prev = recall;
    }
    return ap;
}

struct MetricCase {
    std::vector<double> scores;
    std::vector<int> labels;
};

// Quantized scores so ties actually occur; both classes guaranteed.
inline MetricCase random_metric_case(g3ad::Rng& rng, int max_n = 50) {
    const int n = 2 + rng.uniform_int(max_n - 1);
    MetricCase c;
    c.scores.resize(n);
    c.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        c.scores[i] = rng.uniform_int(8) / 4.0;
        c.labels[i] = rng.uniform() < 0.3 ? 1 : 0;
    }
    c.labels[0] = 1;
    c.labels[1] = 0;
    return c;
}

}  // namespace test_support

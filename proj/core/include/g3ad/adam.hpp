#pragma once

#include <string>
#include <utility>
#include <vector>

#include "g3ad/tensor.hpp"

namespace g3ad {

using NamedParam = std::pair<std::string, Tensor>;

struct AdamConfig {
    double learning_rate = 5e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction. Moment matrices are kept aligned with the
/// parameter list given at construction; step() reads each parameter's
/// grad and updates its value in place.
class AdamState {
public:
    AdamState(const std::vector<NamedParam>& params, AdamConfig cfg);

    /// One full-batch update. Throws TrainingError naming the parameter if
    /// any gradient entry is non-finite.
    void step(const std::vector<NamedParam>& params);

    long step_count() const { return step_count_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    long step_count_ = 0;
    std::vector<Matrix> first_moment_;
    std::vector<Matrix> second_moment_;
};

}  // namespace g3ad

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace g3ad {

/// Deterministic random stream. All randomness in the library flows through
/// this wrapper so that a seed fully pins generated graphs, injected
/// anomalies and parameter initialization. Variates are derived from raw
/// mt19937_64 output directly (not std:: distributions) so that identical
/// seeds give identical streams across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; one pair of uniforms per call.
    double normal();

    /// Uniform integer in [0, n), n >= 1.
    int uniform_int(int n);

    /// k distinct indices drawn uniformly from [0, n), in draw order.
    std::vector<int> sample_without_replacement(int n, int k);

private:
    std::mt19937_64 gen_;
};

}  // namespace g3ad

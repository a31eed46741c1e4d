#include "g3ad/rng.hpp"

#include <cmath>
#include <numbers>

#include "g3ad/errors.hpp"

namespace g3ad {

double Rng::normal() {
    // Box-Muller; u1 bounded away from 0 so log stays finite.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int n) {
    if (n <= 0) throw ContractError("uniform_int: n must be positive");
    // Multiply-shift mapping of the full 64-bit draw onto [0, n).
    const unsigned __int128 wide = static_cast<unsigned __int128>(gen_()) * static_cast<unsigned __int128>(n);
    return static_cast<int>(wide >> 64);
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
    if (k > n) throw ContractError("sample_without_replacement: k > n");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        const int j = i + uniform_int(n - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

}  // namespace g3ad

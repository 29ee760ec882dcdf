#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vpp::scenario {

/// Row-major n x dims matrix of samples in [0, 1).
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

/// Latin hypercube sample. Column d uses RNG stream d: a Fisher-Yates
/// permutation of the n strata followed by one jitter per row, so every
/// stratum [k/n, (k+1)/n) of every column holds exactly one point.
SampleMatrix lhsSample(std::size_t n, std::size_t dims, std::uint64_t seed);

/// Stratum index of `u` for n strata; the same rounding the sampler guards.
inline std::size_t stratumOf(double u, std::size_t n) {
    return static_cast<std::size_t>(u * static_cast<double>(n));
}

}  // namespace vpp::scenario

#include "vpp/scenario/lhs.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vpp/scenario/rng.hpp"

namespace vpp::scenario {

SampleMatrix lhsSample(std::size_t n, std::size_t dims, std::uint64_t seed) {
    if (n == 0 || dims == 0) throw std::invalid_argument("lhsSample needs n >= 1 and dims >= 1");
    SampleMatrix m{n, dims, std::vector<double>(n * dims)};
    const double dn = static_cast<double>(n);
    std::vector<std::size_t> perm(n);
    for (std::size_t d = 0; d < dims; ++d) {
        CounterRng rng(seed, d);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(perm[i], perm[j]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t k = perm[r];
            double u = (static_cast<double>(k) + rng.uniform()) / dn;
            // keep the rounded value inside its stratum
            while (stratumOf(u, n) > k) u = std::nextafter(u, 0.0);
            while (stratumOf(u, n) < k) u = std::nextafter(u, 1.0);
            m.at(r, d) = u;
        }
    }
    return m;
}

}  // namespace vpp::scenario

// Obtuse probability for uniform points on the sphere, d = 2..30, with a
// Monte Carlo check at each dimension.
#include "obtuse.hpp"

#include <cstdio>

int main() {
    using namespace obtuse;
    std::printf("%4s %12s %12s %12s\n", "d", "quadrature", "asymptotic", "mc(2e5)");
    for (int d : {2, 3, 4, 5, 6, 8, 10, 15, 20, 30}) {
        const auto e = estimate(SphereSampler{d}, 200'000, 1000 + static_cast<std::uint64_t>(d), kDefaultTolerance, 0);
        std::printf("%4d %12.6f %12.6f %12.6f\n", d, obtuse_prob_sphere(d), asymptotic_sphere(d), e.p_hat);
    }
}

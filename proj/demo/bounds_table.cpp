// Prints the extrapolated non-acute fraction for d = 2..8 next to the
// asymptotic value and the trivial bound.
#include "obtuse.hpp"

#include <cstdio>

int main() {
    using namespace obtuse;
    std::printf("%3s %14s %14s %14s\n", "d", "lower", "asymptotic", "naive");
    for (int d = 2; d <= 8; ++d) {
        const auto r = limit_bound(d, 1'000'000);
        std::printf("%3d %14.6g %14.6g %14.6g\n", d, to_double(r.lower_bound),
                    to_double(asymptotic_bound(d)), to_double(naive_bound(d)));
    }
}

// Anneals n points in the plane and space and compares with the closed forms.
#include "obtuse.hpp"

#include <cstdio>

int main() {
    using namespace obtuse;
    for (int d : {2, 3}) {
        for (std::size_t n = d == 2 ? 4 : 6; n <= 9; ++n) {
            SearchParams p;
            p.n = n;
            p.d = d;
            p.iterations = 10'000;
            p.restarts = 4;
            p.seed = n;
            p.workers = 0;
            const auto r = search_min(p);
            std::printf("d=%d n=%zu best=%llu bound=%s\n", d, n, static_cast<unsigned long long>(r.best_count),
                        r.bound ? r.bound->str().c_str() : "-");
        }
    }
}

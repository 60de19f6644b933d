// Runs the two planar/spatial constructions and prints their pattern tables.
#include "obtuse.hpp"

#include <cstdio>

int main() {
    using namespace obtuse;

    ArcTripleParams arc;
    arc.epsilon = 0.04L;
    arc.alpha = arc.epsilon * arc.epsilon / 50;
    arc.delta = arc.alpha / 2;
    const auto rep = arc_triple_pattern_report(arc, 500'000, 1, 0.0, 0);
    std::printf("three arcs, eps=%.3g: obtuse %.5f (4/9 = %.5f)\n", static_cast<double>(arc.epsilon),
                rep.overall.p_hat, 4.0 / 9.0);
    for (auto p : kAllArcPatterns)
        std::printf("  %s  n=%7llu  acute %.4f\n", std::string(to_string(p)).c_str(),
                    static_cast<unsigned long long>(rep.total(p)), rep.fraction(p, TriangleClass::Acute));

    const auto fp = maximize_acute();
    const auto ss = mc_self_similar(SelfSimilarParams{}, 500'000, 2, 0.0, 0);
    std::printf("nested caps, p=%.6f: obtuse %.5f (fixed point %.5f)\n", fp.p, ss.overall.p_hat, fp.obtuse);
    const char* names[] = {"one shallow", "two shallow", "three shallow"};
    for (int i = 0; i < 3; ++i)
        std::printf("  %-14s acute %.4f\n", names[i], ss.acute_rate(static_cast<LevelPattern>(i)));
}

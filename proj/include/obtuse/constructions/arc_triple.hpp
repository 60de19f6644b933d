#pragma once

#include "obtuse/errors.hpp"
#include "obtuse/geometry.hpp"
#include "obtuse/monte_carlo.hpp"
#include "obtuse/random.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace obtuse {

using Vec2L = std::array<long double, 2>;

struct ArcTripleParams {
    long double alpha = 1e-2L;    // angle at A is pi/2 - alpha
    long double delta = 1e-3L;    // length of the arc at A
    long double epsilon = 1e-2L;  // the C and B arcs have lengths eps*delta, eps^2*delta
    /// Angle at B; unset means pi/2 - alpha, leaving 2 alpha at C.
    std::optional<long double> angle_b;
    /// Common arc radius. Unset: each arc lies on the circle about its far
    /// vertex through its own vertex.
    std::optional<long double> radius;
};

struct Arc {
    Vec2L midpoint;
    Vec2L center;
    long double radius;
    long double length;

    [[nodiscard]] long double angular_span() const { return length / radius; }
};

enum ArcLabel : std::uint32_t { kArcA = 0, kArcC = 1, kArcB = 2 };

struct ArcTripleGeometry {
    Vec2L a, b, c;
    std::array<Arc, 3> arcs;  // indexed by ArcLabel
    std::array<long double, 3> angles;  // interior angles at A, B, C
};

namespace detail {

inline long double norm2(const Vec2L& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1]); }

inline Vec2L make_arc_center(const Vec2L& x, const Vec2L& far, std::optional<long double> r) {
    if (!r) return far;
    const Vec2L dir{far[0] - x[0], far[1] - x[1]};
    const long double len = norm2(dir);
    return {x[0] + *r * dir[0] / len, x[1] + *r * dir[1] / len};
}

}  // namespace detail

inline void validate(const ArcTripleParams& p) {
    const long double pi = std::numbers::pi_v<long double>;
    if (!(p.alpha > 0 && p.alpha < pi / 8)) throw UsageError("alpha must lie in (0, pi/8)");
    if (!(p.delta > 0)) throw UsageError("delta must be positive");
    if (!(p.epsilon > 0 && p.epsilon < 1)) throw UsageError("epsilon must lie in (0, 1)");
    if (p.angle_b) {
        if (!(*p.angle_b > 0 && *p.angle_b < pi / 2))
            throw UsageError("angle_b must lie in (0, pi/2)");
        if (!(*p.angle_b > p.alpha)) throw UsageError("angle at C must be below pi/2");
    }
    if (p.radius && !(*p.radius > 0)) throw UsageError("arc radius must be positive");
}

/// Triangle A=(0,0), C=(1,0), B above AC, and the three arcs.
///
/// Each arc is tangent-perpendicular to the side joining its vertex to the
/// far vertex (A to C, C to B, B to A) and bends toward that far vertex.
inline ArcTripleGeometry arc_triple_geometry(const ArcTripleParams& p) {
    validate(p);
    const long double pi = std::numbers::pi_v<long double>;
    const long double ang_a = pi / 2 - p.alpha;
    const long double ang_b = p.angle_b.value_or(pi / 2 - p.alpha);
    const long double ang_c = pi - ang_a - ang_b;
    const long double ab = std::sin(ang_c) / std::sin(ang_b);

    ArcTripleGeometry g;
    g.a = {0, 0};
    g.c = {1, 0};
    g.b = {ab * std::cos(ang_a), ab * std::sin(ang_a)};
    g.angles = {ang_a, ang_b, ang_c};

    const std::array<long double, 3> lengths{p.delta, p.epsilon * p.delta,
                                             p.epsilon * p.epsilon * p.delta};
    const std::array<Vec2L, 3> vertex{g.a, g.c, g.b};
    const std::array<Vec2L, 3> far{g.c, g.b, g.a};
    for (std::size_t k = 0; k < 3; ++k) {
        Arc arc;
        arc.midpoint = vertex[k];
        arc.center = detail::make_arc_center(vertex[k], far[k], p.radius);
        const Vec2L r{vertex[k][0] - arc.center[0], vertex[k][1] - arc.center[1]};
        arc.radius = detail::norm2(r);
        arc.length = lengths[k];
        if (!(arc.angular_span() < pi / 8))
            throw UsageError("arc angular extent must stay below pi/8");
        g.arcs[k] = arc;
    }
    return g;
}

/// Point at arc-length offset s*length (s in [-1/2, 1/2]) from the arc
/// midpoint, minus `origin`. Built as midpoint + chord offset so the
/// sagitta survives rounding.
inline Vec2L point_on_arc(const Arc& arc, long double s, const Vec2L& origin) {
    const Vec2L r{arc.midpoint[0] - arc.center[0], arc.midpoint[1] - arc.center[1]};
    const Vec2L perp{-r[1], r[0]};
    const long double th = s * arc.length / arc.radius;
    const long double h = std::sin(th / 2);
    const long double sn = std::sin(th);
    return {arc.midpoint[0] - origin[0] - 2 * h * h * r[0] + sn * perp[0],
            arc.midpoint[1] - origin[1] - 2 * h * h * r[1] + sn * perp[1]};
}

/// Mass 1/3 uniform on each arc. Points are reported relative to B, the
/// vertex of the shortest arc, which keeps its geometry resolvable.
class ArcTripleSampler {
public:
    using value_type = long double;

    explicit ArcTripleSampler(const ArcTripleParams& params)
        : params_(params), geometry_(arc_triple_geometry(params)) {}

    [[nodiscard]] std::size_t dim() const { return 2; }
    [[nodiscard]] const ArcTripleGeometry& geometry() const { return geometry_; }
    [[nodiscard]] const ArcTripleParams& params() const { return params_; }

    std::uint32_t sample(Rng& rng, std::span<long double> out) const {
        const auto k = static_cast<std::uint32_t>(rng() % 3);
        const long double s = uniform01l(rng) - 0.5L;
        const Vec2L q = point_on_arc(geometry_.arcs[k], s, geometry_.b);
        out[0] = q[0];
        out[1] = q[1];
        return k;
    }

private:
    ArcTripleParams params_;
    ArcTripleGeometry geometry_;
};

/// The ten arc multisets.
enum class ArcPattern : std::uint8_t { AAA, BBB, CCC, ABC, AAB, AAC, BBA, BBC, CCA, CCB };

inline constexpr std::array<ArcPattern, 10> kAllArcPatterns{
    ArcPattern::AAA, ArcPattern::BBB, ArcPattern::CCC, ArcPattern::ABC, ArcPattern::AAB,
    ArcPattern::AAC, ArcPattern::BBA, ArcPattern::BBC, ArcPattern::CCA, ArcPattern::CCB};

inline constexpr std::string_view to_string(ArcPattern p) {
    constexpr std::array<std::string_view, 10> names{"AAA", "BBB", "CCC", "ABC", "AAB",
                                                     "AAC", "BBA", "BBC", "CCA", "CCB"};
    return names[static_cast<std::size_t>(p)];
}

/// Patterns whose triangles the construction makes acute.
inline constexpr bool pattern_expected_acute(ArcPattern p) {
    return p == ArcPattern::ABC || p == ArcPattern::AAC || p == ArcPattern::BBA ||
           p == ArcPattern::CCB;
}

inline ArcPattern classify_pattern(const std::array<std::uint32_t, 3>& labels) {
    int na = 0, nb = 0, nc = 0;
    for (auto l : labels) {
        if (l == kArcA) ++na;
        else if (l == kArcB) ++nb;
        else ++nc;
    }
    if (na == 3) return ArcPattern::AAA;
    if (nb == 3) return ArcPattern::BBB;
    if (nc == 3) return ArcPattern::CCC;
    if (na == 1 && nb == 1) return ArcPattern::ABC;
    if (na == 2) return nb == 1 ? ArcPattern::AAB : ArcPattern::AAC;
    if (nb == 2) return na == 1 ? ArcPattern::BBA : ArcPattern::BBC;
    return na == 1 ? ArcPattern::CCA : ArcPattern::CCB;
}

struct PatternReport {
    std::array<ClassTally, 10> by_pattern{};
    Estimate overall;
    double epsilon = 0;

    [[nodiscard]] const ClassTally& tally(ArcPattern p) const {
        return by_pattern[static_cast<std::size_t>(p)];
    }
    [[nodiscard]] std::uint64_t total(ArcPattern p) const {
        const auto& t = tally(p);
        return t[0] + t[1] + t[2] + t[3];
    }
    [[nodiscard]] double fraction(ArcPattern p, TriangleClass c) const {
        const auto n = total(p);
        return n == 0 ? 0.0
                      : static_cast<double>(tally(p)[static_cast<std::size_t>(c)]) /
                            static_cast<double>(n);
    }
    /// (1 - acute fraction) / epsilon for the patterns that should be acute.
    [[nodiscard]] double failure_constant(ArcPattern p) const {
        return (1.0 - fraction(p, TriangleClass::Acute)) / epsilon;
    }
    [[nodiscard]] double acute_fraction() const {
        return overall.fraction(TriangleClass::Acute);
    }
    static constexpr double predicted_acute = 5.0 / 9.0;
};

inline PatternReport arc_triple_pattern_report(const ArcTripleParams& params,
                                               std::uint64_t samples, std::uint64_t seed,
                                               double tol = kDefaultTolerance,
                                               unsigned workers = 1) {
    if (samples == 0) throw UsageError("samples must be at least 1");
    const ArcTripleSampler sampler(params);
    using Acc = std::array<ClassTally, 10>;
    const auto shards = sample_triples<Acc>(
        sampler, samples, SeedPolicy{seed}, static_cast<long double>(tol), workers,
        [](const TripleLabels& t, Acc& acc) {
            ++acc[static_cast<std::size_t>(classify_pattern(t.label))]
                 [static_cast<std::size_t>(t.cls)];
        });
    PatternReport rep;
    rep.epsilon = static_cast<double>(params.epsilon);
    ClassTally total{};
    for (const auto& s : shards) {
        for (std::size_t p = 0; p < 10; ++p) {
            for (std::size_t c = 0; c < 4; ++c) {
                rep.by_pattern[p][c] += s[p][c];
                total[c] += s[p][c];
            }
        }
    }
    rep.overall = make_estimate(total, seed, tol);
    return rep;
}

}  // namespace obtuse

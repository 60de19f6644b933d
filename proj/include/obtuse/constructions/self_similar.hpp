#pragma once

#include "obtuse/constructions/fixed_point.hpp"
#include "obtuse/errors.hpp"
#include "obtuse/geometry.hpp"
#include "obtuse/monte_carlo.hpp"
#include "obtuse/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace obtuse {

using Vec3L = std::array<long double, 3>;

struct SelfSimilarParams {
    long double p = static_cast<long double>(optimal_cap_mass());
    long double cap_half_angle = 0.25L;
    long double epsilon = 0.04L;
    long double delta = 0.04L * 0.04L / 30;
    long double rho = 0;  // 0 selects 1e-3 * eps^2 * delta * cap_half_angle
    int max_depth = 12;

    [[nodiscard]] long double effective_rho() const {
        return rho > 0 ? rho : 1e-3L * epsilon * epsilon * delta * cap_half_angle;
    }
};

inline void validate(const SelfSimilarParams& s) {
    if (!(s.p > 0 && s.p <= 1)) throw UsageError("cap mass p must lie in (0, 1]");
    if (!(s.cap_half_angle > 0 && s.cap_half_angle < 0.5L))
        throw UsageError("cap_half_angle must lie in (0, 0.5)");
    if (!(s.epsilon > 0 && s.epsilon < 1)) throw UsageError("epsilon must lie in (0, 1)");
    if (!(s.delta > 0 && s.delta < 0.1L)) throw UsageError("delta must lie in (0, 0.1)");
    if (!(s.rho >= 0 && s.rho < 1)) throw UsageError("rho must lie in [0, 1)");
    if (s.max_depth < 0 || s.max_depth > 64) throw UsageError("max_depth must lie in [0, 64]");
}

/// Mass beyond max_depth, folded into the deepest level.
inline long double tail_mass(const SelfSimilarParams& s) {
    return std::pow(1 - s.p, static_cast<long double>(s.max_depth + 1));
}

struct CapArc {
    Vec3L midpoint;
    Vec3L axis_foot;  // projection of the midpoint on the axis through the far vertex
    Vec3L e2;         // unit tangent of the arc at the midpoint
    long double radius;
    long double length;
};

/// Level j is the unit-sphere cap layout scaled by rho^j about the origin.
///
/// The layout puts A at the pole and B, C at polar angle cap_half_angle
/// along orthogonal meridians, so the spherical angle at A is right. Each
/// arc is the circle of points equidistant from the far vertex (A from C,
/// C from B, B from A), with lengths delta, eps*delta, eps^2*delta times |AC|.
class SelfSimilarSampler {
public:
    using value_type = long double;

    explicit SelfSimilarSampler(const SelfSimilarParams& params) : params_(params) {
        validate(params_);
        const long double c = params_.cap_half_angle;
        a_ = {0, 0, 1};
        b_ = {std::sin(c), 0, std::cos(c)};
        c_ = {0, std::sin(c), std::cos(c)};
        const long double ac = dist(a_, c_);
        arcs_[0] = make_arc(a_, c_, params_.delta * ac);
        arcs_[1] = make_arc(c_, b_, params_.epsilon * params_.delta * ac);
        arcs_[2] = make_arc(b_, a_, params_.epsilon * params_.epsilon * params_.delta * ac);

        const long double rho = params_.effective_rho();
        scale_.resize(static_cast<std::size_t>(params_.max_depth) + 1);
        long double s = 1;
        for (auto& x : scale_) {
            x = s;
            s *= rho;
        }
        log1m_p_ = params_.p < 1 ? std::log1p(-static_cast<double>(params_.p)) : 0.0;
    }

    [[nodiscard]] std::size_t dim() const { return 3; }
    [[nodiscard]] const SelfSimilarParams& params() const { return params_; }
    [[nodiscard]] const std::array<CapArc, 3>& arcs() const { return arcs_; }

    /// Level j >= 0 with probability p(1-p)^j, truncated at max_depth.
    [[nodiscard]] int draw_level(Rng& rng) const {
        if (params_.p >= 1) return 0;
        const double u = uniform01(rng);
        const double j = std::floor(std::log1p(-u) / log1m_p_);
        return j >= params_.max_depth ? params_.max_depth : static_cast<int>(j);
    }

    /// Label = 4 * level + arc (arc 0 = A, 1 = C, 2 = B).
    std::uint32_t sample(Rng& rng, std::span<long double> out) const {
        const int level = draw_level(rng);
        const auto k = static_cast<std::uint32_t>(rng() % 3);
        const long double s = uniform01l(rng) - 0.5L;
        const CapArc& arc = arcs_[k];
        const long double phi = s * arc.length / arc.radius;
        const long double h = std::sin(phi / 2);
        const long double sn = std::sin(phi);
        const long double sc = scale_[static_cast<std::size_t>(level)];
        for (std::size_t i = 0; i < 3; ++i) {
            const long double r = arc.midpoint[i] - arc.axis_foot[i];
            out[i] = sc * (arc.midpoint[i] - 2 * h * h * r + arc.radius * sn * arc.e2[i]);
        }
        return static_cast<std::uint32_t>(level) * 4 + k;
    }

    static int level_of(std::uint32_t label) { return static_cast<int>(label / 4); }
    static std::uint32_t arc_of(std::uint32_t label) { return label % 4; }

private:
    static long double dist(const Vec3L& x, const Vec3L& y) {
        long double s = 0;
        for (std::size_t i = 0; i < 3; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
        return std::sqrt(s);
    }

    static CapArc make_arc(const Vec3L& x, const Vec3L& far, long double length) {
        long double fn = 0;
        for (auto v : far) fn += v * v;
        fn = std::sqrt(fn);
        const Vec3L u{far[0] / fn, far[1] / fn, far[2] / fn};
        const long double xu = x[0] * u[0] + x[1] * u[1] + x[2] * u[2];
        CapArc arc;
        arc.midpoint = x;
        arc.axis_foot = {xu * u[0], xu * u[1], xu * u[2]};
        const Vec3L r{x[0] - arc.axis_foot[0], x[1] - arc.axis_foot[1], x[2] - arc.axis_foot[2]};
        arc.radius = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
        const Vec3L e1{r[0] / arc.radius, r[1] / arc.radius, r[2] / arc.radius};
        arc.e2 = {u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2],
                  u[0] * e1[1] - u[1] * e1[0]};
        arc.length = length;
        return arc;
    }

    SelfSimilarParams params_;
    Vec3L a_{}, b_{}, c_{};
    std::array<CapArc, 3> arcs_{};
    std::vector<long double> scale_;
    double log1m_p_ = 0;
};

/// Triples grouped by how many points sit at the shallowest level present.
enum class LevelPattern : std::uint8_t {
    OneShallow = 0,   // one point on the outer cap, two in its patch
    TwoShallow = 1,   // two on the cap, one in the patch
    ThreeShallow = 2  // all three on the same level
};

struct SelfSimilarReport {
    Estimate overall;
    std::array<ClassTally, 3> by_pattern{};
    std::vector<std::uint64_t> level_counts;  // per point
    long double p = 0;
    long double tail_mass = 0;

    [[nodiscard]] std::uint64_t total(LevelPattern lp) const {
        const auto& t = by_pattern[static_cast<std::size_t>(lp)];
        return t[0] + t[1] + t[2] + t[3];
    }
    [[nodiscard]] double acute_rate(LevelPattern lp) const {
        const auto n = total(lp);
        return n == 0 ? 0.0
                      : static_cast<double>(by_pattern[static_cast<std::size_t>(lp)][0]) /
                            static_cast<double>(n);
    }
    [[nodiscard]] double acute_fraction() const { return overall.fraction(TriangleClass::Acute); }

    /// Acute probability implied by the measured per-pattern acute rates
    /// under the geometric level law: the solution x of
    /// x = 3(1-p)p^2 a2 + 3p(1-p)^2 a1 + (1-p)^3 x + p^3 a3.
    [[nodiscard]] double accounted_acute() const {
        const double q = 1.0 - static_cast<double>(p);
        const double pp = static_cast<double>(p);
        const double num = 3 * q * pp * pp * acute_rate(LevelPattern::TwoShallow) +
                           3 * pp * q * q * acute_rate(LevelPattern::OneShallow) +
                           pp * pp * pp * acute_rate(LevelPattern::ThreeShallow);
        return num / (1 - q * q * q);
    }
    /// Binomial standard error of the overall acute fraction.
    [[nodiscard]] double acute_sigma() const {
        const double x = acute_fraction();
        return std::sqrt(x * (1 - x) / static_cast<double>(overall.samples));
    }
};

inline LevelPattern level_pattern(const std::array<std::uint32_t, 3>& labels) {
    const int la = SelfSimilarSampler::level_of(labels[0]);
    const int lb = SelfSimilarSampler::level_of(labels[1]);
    const int lc = SelfSimilarSampler::level_of(labels[2]);
    const int m = std::min({la, lb, lc});
    const int at_min = (la == m) + (lb == m) + (lc == m);
    return static_cast<LevelPattern>(at_min - 1);
}

/// Monte Carlo over the self-similar distribution with level-pattern
/// accounting. Thin cross-level triangles need tol = 0.
inline SelfSimilarReport mc_self_similar(const SelfSimilarParams& params, std::uint64_t samples,
                                         std::uint64_t seed, double tol = 0.0,
                                         unsigned workers = 1) {
    if (samples == 0) throw UsageError("samples must be at least 1");
    const SelfSimilarSampler sampler(params);
    const std::size_t levels = static_cast<std::size_t>(params.max_depth) + 1;
    struct Acc {
        std::array<ClassTally, 3> by_pattern{};
        std::vector<std::uint64_t> level_counts;
    };
    const auto shards = sample_triples<Acc>(
        sampler, samples, SeedPolicy{seed}, static_cast<long double>(tol), workers,
        [levels](const TripleLabels& t, Acc& acc) {
            if (acc.level_counts.empty()) acc.level_counts.assign(levels, 0);
            ++acc.by_pattern[static_cast<std::size_t>(level_pattern(t.label))]
                            [static_cast<std::size_t>(t.cls)];
            for (auto l : t.label) ++acc.level_counts[SelfSimilarSampler::level_of(l)];
        });

    SelfSimilarReport rep;
    rep.p = params.p;
    rep.tail_mass = tail_mass(params);
    rep.level_counts.assign(levels, 0);
    ClassTally total{};
    for (const auto& s : shards) {
        for (std::size_t lp = 0; lp < 3; ++lp) {
            for (std::size_t c = 0; c < 4; ++c) {
                rep.by_pattern[lp][c] += s.by_pattern[lp][c];
                total[c] += s.by_pattern[lp][c];
            }
        }
        for (std::size_t j = 0; j < s.level_counts.size(); ++j)
            rep.level_counts[j] += s.level_counts[j];
    }
    rep.overall = make_estimate(total, seed, tol);
    return rep;
}

}  // namespace obtuse

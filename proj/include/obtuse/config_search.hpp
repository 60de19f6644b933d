#pragma once

#include "obtuse/big.hpp"
#include "obtuse/errors.hpp"
#include "obtuse/exact_bounds.hpp"
#include "obtuse/geometry.hpp"
#include "obtuse/monte_carlo.hpp"
#include "obtuse/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace obtuse {

enum class CountMode { NonAcute, StrictObtuse };

inline std::string_view to_string(CountMode m) {
    return m == CountMode::NonAcute ? "non-acute" : "strict-obtuse";
}

inline CountMode parse_count_mode(std::string_view s) {
    if (s == "non-acute" || s == "nonacute") return CountMode::NonAcute;
    if (s == "strict-obtuse" || s == "strict" || s == "obtuse") return CountMode::StrictObtuse;
    throw UsageError("unknown count mode '" + std::string(s) + "'");
}

inline bool counts_as_bad(TriangleClass c, CountMode mode) {
    return mode == CountMode::NonAcute ? c != TriangleClass::Acute : c == TriangleClass::Obtuse;
}

struct SearchParams {
    std::size_t n = 4;
    int d = 2;
    std::uint64_t iterations = 50'000;
    unsigned restarts = 10;
    double initial_temperature = 1.0;
    double cooling = 0.9998;     // per iteration
    double scale_start = 0.3;    // perturbation sigma, as a fraction of the diameter
    double scale_end = 1e-4;
    std::uint64_t seed = 0;
    CountMode mode = CountMode::NonAcute;
    bool warm_starts = true;
    double tol = kDefaultTolerance;
    unsigned workers = 1;
};

inline void validate(const SearchParams& p) {
    if (p.n < 3) throw UsageError("search needs n >= 3");
    if (p.d < 2) throw UsageError("search needs d >= 2");
    if (p.restarts == 0) throw UsageError("search needs at least one restart");
    if (!(p.cooling > 0 && p.cooling < 1)) throw UsageError("cooling factor must lie in (0, 1)");
    if (!(p.initial_temperature > 0)) throw UsageError("initial temperature must be positive");
    if (!(p.scale_start > 0 && p.scale_end > 0)) throw UsageError("perturbation scales must be positive");
    if (!(p.tol >= 0)) throw UsageError("tolerance must be nonnegative");
}

struct RestartOutcome {
    unsigned index = 0;
    std::uint64_t seed = 0;
    std::string start;
    std::uint64_t count = 0;
    double margin = 0;
    std::vector<PointD> points;
};

struct SearchResult {
    SearchParams params;
    std::vector<PointD> best;
    std::uint64_t best_count = 0;
    double best_margin = 0;
    unsigned best_restart = 0;
    ClassCounts counts;
    std::optional<BigCount> bound;  // closed form for d in {2, 3} once n reaches the base case
    std::optional<BigCount> gap;    // best_count - bound
    std::vector<std::uint64_t> best_so_far;  // best count over restarts 0..r
    std::vector<RestartOutcome> restarts;

    [[nodiscard]] Configuration configuration() const { return Configuration(best); }
};

/// Closed-form lower bound on non-acute triples, when one applies.
inline std::optional<BigCount> lemma_bound(std::size_t n, int d) {
    if (d == 2 && n >= 4) return closed_form_2d(n);
    if (d == 3 && n >= 6) return closed_form_3d(n);
    return std::nullopt;
}

namespace detail {

// min over vertices of |dot| / (largest squared edge); 0 for a degenerate triangle.
inline double triangle_margin(std::span<const double> a, std::span<const double> b,
                              std::span<const double> c) {
    double e_ab = 0, e_ac = 0, e_bc = 0, uv = 0, uw = 0, vw = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double u = b[i] - a[i], v = c[i] - a[i], w = c[i] - b[i];
        e_ab += u * u;
        e_ac += v * v;
        e_bc += w * w;
        uv += u * v;
        uw += u * w;
        vw += v * w;
    }
    const double scale = std::max({e_ab, e_ac, e_bc});
    if (!(scale > 0)) return 0;
    return std::min({std::abs(uv), std::abs(uw), std::abs(vw)}) / scale;
}

inline std::vector<std::vector<double>> regular_polygon(std::size_t n) {
    std::vector<std::vector<double>> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts[i] = {std::cos(t), std::sin(t)};
    }
    return pts;
}

inline std::vector<std::vector<double>> cross_polytope(int d) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < d; ++i) {
        for (double s : {1.0, -1.0}) {
            std::vector<double> p(static_cast<std::size_t>(d), 0.0);
            p[static_cast<std::size_t>(i)] = s;
            pts.push_back(std::move(p));
        }
    }
    return pts;
}

inline std::vector<std::vector<double>> uniform_ball(std::size_t n, int d, Rng& rng) {
    std::normal_distribution<double> normal;
    std::vector<std::vector<double>> pts(n, std::vector<double>(static_cast<std::size_t>(d)));
    for (auto& p : pts) {
        double norm2 = 0;
        do {
            norm2 = 0;
            for (auto& x : p) {
                x = normal(rng);
                norm2 += x * x;
            }
        } while (norm2 == 0);
        const double r = std::pow(uniform01(rng), 1.0 / d) / std::sqrt(norm2);
        for (auto& x : p) x *= r;
    }
    return pts;
}

struct Triple {
    std::uint32_t i, j, k;
};

class Annealer {
public:
    Annealer(const SearchParams& params, std::vector<std::vector<double>> start)
        : p_(params), n_(params.n), d_(static_cast<std::size_t>(params.d)) {
        xs_.resize(n_ * d_);
        for (std::size_t i = 0; i < n_; ++i)
            std::copy(start[i].begin(), start[i].end(), xs_.begin() + i * d_);
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t j = i + 1; j < n_; ++j)
                for (std::uint32_t k = j + 1; k < n_; ++k) triples_.push_back({i, j, k});
        incident_.resize(n_);
        for (std::size_t t = 0; t < triples_.size(); ++t) {
            incident_[triples_[t].i].push_back(t);
            incident_[triples_[t].j].push_back(t);
            incident_[triples_[t].k].push_back(t);
        }
        bad_.resize(triples_.size());
        margin_.resize(triples_.size());
        for (std::size_t t = 0; t < triples_.size(); ++t) evaluate(t, bad_[t], margin_[t]);
        count_ = static_cast<std::uint64_t>(std::count(bad_.begin(), bad_.end(), 1));
        min_margin_ = *std::min_element(margin_.begin(), margin_.end());
    }

    RestartOutcome run(Rng& rng) {
        std::normal_distribution<double> normal;
        std::uint64_t best_count = count_;
        double best_margin = min_margin_;
        std::vector<double> best_xs = xs_;

        std::vector<double> old(d_);
        std::vector<std::uint8_t> saved_bad;
        std::vector<double> saved_margin;
        double temperature = p_.initial_temperature;
        const double steps = p_.iterations > 1 ? static_cast<double>(p_.iterations - 1) : 1.0;
        const double log_ratio = std::log(p_.scale_end / p_.scale_start);

        for (std::uint64_t it = 0; it < p_.iterations; ++it) {
            const double sigma =
                diameter() * p_.scale_start * std::exp(log_ratio * static_cast<double>(it) / steps);
            const std::size_t i = static_cast<std::size_t>(rng() % n_);
            double* xi = xs_.data() + i * d_;
            std::copy(xi, xi + d_, old.begin());
            for (std::size_t c = 0; c < d_; ++c) xi[c] += sigma * normal(rng);
            const double u = uniform01(rng);
            if (coincides(i)) {
                std::copy(old.begin(), old.end(), xi);
                temperature *= p_.cooling;
                continue;
            }

            const auto& inc = incident_[i];
            saved_bad.resize(inc.size());
            saved_margin.resize(inc.size());
            std::int64_t new_count = static_cast<std::int64_t>(count_);
            for (std::size_t q = 0; q < inc.size(); ++q) {
                const std::size_t t = inc[q];
                saved_bad[q] = bad_[t];
                saved_margin[q] = margin_[t];
                evaluate(t, bad_[t], margin_[t]);
                new_count += static_cast<std::int64_t>(bad_[t]) - saved_bad[q];
            }
            const double new_margin = *std::min_element(margin_.begin(), margin_.end());
            const double delta = static_cast<double>(new_count - static_cast<std::int64_t>(count_)) -
                                 kMarginWeight * (new_margin - min_margin_);
            if (delta <= 0 || u < std::exp(-delta / temperature)) {
                count_ = static_cast<std::uint64_t>(new_count);
                min_margin_ = new_margin;
                if (count_ < best_count || (count_ == best_count && min_margin_ > best_margin)) {
                    best_count = count_;
                    best_margin = min_margin_;
                    best_xs = xs_;
                }
            } else {
                std::copy(old.begin(), old.end(), xi);
                for (std::size_t q = 0; q < inc.size(); ++q) {
                    bad_[inc[q]] = saved_bad[q];
                    margin_[inc[q]] = saved_margin[q];
                }
            }
            temperature *= p_.cooling;
        }

        RestartOutcome out;
        out.count = best_count;
        out.margin = best_margin;
        for (std::size_t i = 0; i < n_; ++i)
            out.points.emplace_back(
                std::vector<double>(best_xs.begin() + i * d_, best_xs.begin() + (i + 1) * d_));
        return out;
    }

private:
    static constexpr double kMarginWeight = 0.5;

    std::span<const double> point(std::size_t i) const { return {xs_.data() + i * d_, d_}; }

    void evaluate(std::size_t t, std::uint8_t& bad, double& margin) const {
        const auto& tr = triples_[t];
        const auto a = point(tr.i), b = point(tr.j), c = point(tr.k);
        bad = counts_as_bad(classify_triangle<double>(a, b, c, p_.tol), p_.mode) ? 1 : 0;
        margin = triangle_margin(a, b, c);
    }

    bool coincides(std::size_t i) const {
        for (std::size_t j = 0; j < n_; ++j) {
            if (j != i && std::equal(xs_.begin() + i * d_, xs_.begin() + (i + 1) * d_,
                                     xs_.begin() + j * d_))
                return true;
        }
        return false;
    }

    double diameter() const {
        double best = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                double s = 0;
                for (std::size_t c = 0; c < d_; ++c) {
                    const double v = xs_[i * d_ + c] - xs_[j * d_ + c];
                    s += v * v;
                }
                best = std::max(best, s);
            }
        return std::sqrt(best);
    }

    SearchParams p_;
    std::size_t n_, d_;
    std::vector<double> xs_;
    std::vector<Triple> triples_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<std::uint8_t> bad_;
    std::vector<double> margin_;
    std::uint64_t count_ = 0;
    double min_margin_ = 0;
};

}  // namespace detail

/// Simulated annealing for n points in R^d with few bad triples.
///
/// Restart r uses seed substream r of params.seed; restart 0 starts from a
/// regular polygon (d = 2) or cross-polytope (n = 2d) when warm starts are
/// on. Restarts run concurrently and reduce in index order, so the result
/// depends only on params.
inline SearchResult search_min(const SearchParams& params) {
    validate(params);
    std::vector<RestartOutcome> outcomes(params.restarts);

    auto run_one = [&](unsigned r) {
        const std::uint64_t seed = substream_seed(params.seed, r);
        Rng rng(seed);
        std::vector<std::vector<double>> start;
        std::string label = "uniform_ball";
        if (r == 0 && params.warm_starts && params.d == 2) {
            start = detail::regular_polygon(params.n);
            label = "regular_polygon";
        } else if (r == 0 && params.warm_starts && params.n == 2 * static_cast<std::size_t>(params.d)) {
            start = detail::cross_polytope(params.d);
            label = "cross_polytope";
        } else {
            start = detail::uniform_ball(params.n, params.d, rng);
        }
        detail::Annealer annealer(params, std::move(start));
        RestartOutcome out = annealer.run(rng);
        out.index = r;
        out.seed = seed;
        out.start = label;
        outcomes[r] = std::move(out);
    };

    const unsigned workers = std::min(resolve_workers(params.workers), params.restarts);
    if (workers <= 1) {
        for (unsigned r = 0; r < params.restarts; ++r) run_one(r);
    } else {
        std::atomic<unsigned> next{0};
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (unsigned r = next.fetch_add(1); r < params.restarts;
                             r = next.fetch_add(1))
                            run_one(r);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    SearchResult res;
    res.params = params;
    for (unsigned r = 0; r < params.restarts; ++r) {
        const auto& o = outcomes[r];
        if (r == 0 || o.count < res.best_count ||
            (o.count == res.best_count && o.margin > res.best_margin)) {
            res.best_count = o.count;
            res.best_margin = o.margin;
            res.best_restart = r;
            res.best = o.points;
        }
        res.best_so_far.push_back(res.best_count);
    }
    res.restarts = std::move(outcomes);
    res.counts = count_classes(res.configuration(), params.tol);

    res.bound = lemma_bound(params.n, params.d);
    if (res.bound) {
        res.gap = BigCount(res.best_count) - *res.bound;
        if (params.mode == CountMode::NonAcute && res.best_count < *res.bound)
            throw InvariantViolation("search found " + std::to_string(res.best_count) +
                                     " non-acute triples, below the lower bound " +
                                     res.bound->str() + " for n=" + std::to_string(params.n) +
                                     ", d=" + std::to_string(params.d));
    }
    return res;
}

/// p/q with q <= max_den whose nearest double is exactly x, if any.
inline std::optional<Rational> recognize_rational(double x, std::int64_t max_den = 1'000'000) {
    if (!std::isfinite(x)) return std::nullopt;
    int exp = 0;
    const double mant = std::frexp(x, &exp);
    // x = m * 2^(exp - 53) with m an integer.
    const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
    Rational r = exp >= 53 ? Rational(BigCount(m) << (exp - 53))
                           : Rational(BigCount(m), BigCount(1) << (53 - exp));

    // Convergents h/k of the continued fraction of r.
    BigCount h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Rational rem = r;
    for (;;) {
        BigCount a = numerator(rem) / denominator(rem);
        if (a * denominator(rem) > numerator(rem)) a -= 1;
        const BigCount h2 = a * h1 + h0;
        const BigCount k2 = a * k1 + k0;
        if (k2 > max_den) return std::nullopt;
        Rational cand(h2, k2);
        if (cand.convert_to<double>() == x) return cand;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const Rational frac = rem - Rational(a);
        if (frac == 0) return std::nullopt;
        rem = 1 / frac;
    }
}

struct ExactEnumeration {
    ClassCounts counts;
    bool exact = true;  // false: some coordinate was not recognized and tol-based counting was used
    double tol = 0;
};

/// Tolerance-free class of a triangle with rational vertices.
inline TriangleClass classify_exact(std::span<const Rational> a, std::span<const Rational> b,
                                    std::span<const Rational> c) {
    Rational e_ab = 0, e_ac = 0, uv = 0, uw = 0, vw = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Rational u = b[i] - a[i], v = c[i] - a[i], w = c[i] - b[i];
        e_ab += u * u;
        e_ac += v * v;
        uv += u * v;
        uw += u * w;
        vw += v * w;
    }
    if (e_ab * e_ac - uv * uv == 0) return TriangleClass::Degenerate;
    const Rational da = uv, db = -uw, dc = vw;
    if (da == 0 || db == 0 || dc == 0) return TriangleClass::Right;
    if (da < 0 || db < 0 || dc < 0) return TriangleClass::Obtuse;
    return TriangleClass::Acute;
}

/// Class counts in exact rational arithmetic when every coordinate is a
/// recognizable rational; otherwise tol-based counting, flagged.
inline ExactEnumeration enumerate_exact(const Configuration& config,
                                        double tol = kDefaultTolerance,
                                        std::int64_t max_den = 1'000'000) {
    const std::size_t n = config.size(), d = config.dim();
    std::vector<Rational> q(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            const auto r = recognize_rational(config[i][c], max_den);
            if (!r) return {count_classes(config, tol), false, tol};
            q[i * d + c] = *r;
        }
    }
    std::array<std::uint64_t, 4> tally{};
    auto pt = [&](std::size_t i) { return std::span<const Rational>(q.data() + i * d, d); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                ++tally[static_cast<std::size_t>(classify_exact(pt(i), pt(j), pt(k)))];
    ExactEnumeration out;
    for (std::size_t c = 0; c < 4; ++c) out.counts.by_class[c] = tally[c];
    return out;
}

}  // namespace obtuse

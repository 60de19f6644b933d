#pragma once

#include "obtuse/errors.hpp"
#include "obtuse/geometry.hpp"
#include "obtuse/random.hpp"

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace obtuse {

/// Draws one point into a caller buffer and returns a label (arc, level,
/// component...) for stratified reports.
template <class S>
concept PointSampler = requires(const S& s, Rng& rng, std::span<typename S::value_type> out) {
    typename S::value_type;
    { s.dim() } -> std::convertible_to<std::size_t>;
    { s.sample(rng, out) } -> std::convertible_to<std::uint32_t>;
};

/// Sample i comes from substream floor(i / shard_size) of `master`, at
/// offset i mod shard_size.
struct SeedPolicy {
    std::uint64_t master = 0;
    std::uint64_t shard_size = std::uint64_t{1} << 16;
};

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(rng, first, count, acc) once per shard and returns the shard
/// accumulators in shard order. Workers pull shards from a shared counter;
/// the result does not depend on the worker count.
template <class Acc, class Body>
std::vector<Acc> run_sharded(std::uint64_t samples, const SeedPolicy& policy, unsigned workers,
                             Body&& body) {
    if (policy.shard_size == 0) throw UsageError("shard size must be positive");
    const std::uint64_t shards = (samples + policy.shard_size - 1) / policy.shard_size;
    std::vector<Acc> acc(shards);
    std::vector<std::exception_ptr> errors(shards);
    std::atomic<std::uint64_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::uint64_t s = next.fetch_add(1);
            if (s >= shards) return;
            try {
                Rng rng(substream_seed(policy.master, s));
                const std::uint64_t first = s * policy.shard_size;
                const std::uint64_t count = std::min(policy.shard_size, samples - first);
                body(rng, first, count, acc[s]);
            } catch (...) {
                errors[s] = std::current_exception();
            }
        }
    };

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), shards));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return acc;
}

struct Interval {
    double lo = 0;
    double hi = 1;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                double confidence = 0.95) {
    if (trials == 0) throw UsageError("wilson_interval needs at least one trial");
    if (successes > trials) throw UsageError("successes exceed trials");
    if (!(confidence > 0 && confidence < 1)) throw UsageError("confidence must lie in (0, 1)");
    const double z =
        boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * confidence);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double denom = 1 + z2n;
    const double center = (p + 0.5 * z2n) / denom;
    const double half = z / denom * std::sqrt(p * (1 - p) / n + z2n / (4 * n));
    Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0) out.lo = 0;
    if (successes == trials) out.hi = 1;
    out.lo = std::min(out.lo, p);
    out.hi = std::max(out.hi, p);
    return out;
}

using ClassTally = std::array<std::uint64_t, 4>;

struct Estimate {
    std::uint64_t samples = 0;
    ClassTally counts{};
    double p_hat = 0;
    Interval ci95;
    std::uint64_t seed = 0;
    double tol = kDefaultTolerance;
    nlohmann::json spec;

    [[nodiscard]] std::uint64_t count(TriangleClass c) const {
        return counts[static_cast<std::size_t>(c)];
    }
    [[nodiscard]] double fraction(TriangleClass c) const {
        return samples == 0 ? 0.0 : static_cast<double>(count(c)) / static_cast<double>(samples);
    }
    /// Binomial standard error of the obtuse fraction.
    [[nodiscard]] double sigma() const {
        return samples == 0 ? 0.0 : std::sqrt(p_hat * (1 - p_hat) / static_cast<double>(samples));
    }
};

inline Estimate make_estimate(const ClassTally& counts, std::uint64_t seed, double tol,
                              nlohmann::json spec = {}) {
    Estimate e;
    e.counts = counts;
    for (auto c : counts) e.samples += c;
    if (e.samples == 0) throw UsageError("estimate needs at least one sample");
    const auto obtuse = e.count(TriangleClass::Obtuse);
    e.p_hat = static_cast<double>(obtuse) / static_cast<double>(e.samples);
    e.ci95 = wilson_interval(obtuse, e.samples);
    e.seed = seed;
    e.tol = tol;
    e.spec = std::move(spec);
    return e;
}

namespace detail {

[[noreturn]] inline void rethrow_with_index(std::uint64_t index) {
    const std::string prefix = "sample " + std::to_string(index) + ": ";
    try {
        throw;
    } catch (const UsageError& e) {
        throw UsageError(prefix + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(prefix + e.what());
    }
}

}  // namespace detail

struct TripleLabels {
    std::array<std::uint32_t, 3> label;
    TriangleClass cls;
};

/// Draws `samples` triples and calls visit(labels, acc) for each.
template <class Acc, PointSampler S, class Visit>
std::vector<Acc> sample_triples(const S& sampler, std::uint64_t samples, const SeedPolicy& policy,
                                typename S::value_type tol, unsigned workers, Visit&& visit) {
    using T = typename S::value_type;
    const std::size_t d = sampler.dim();
    return run_sharded<Acc>(
        samples, policy, workers,
        [&](Rng& rng, std::uint64_t first, std::uint64_t count, Acc& acc) {
            std::vector<T> buf(3 * d);
            std::span<T> a(buf.data(), d), b(buf.data() + d, d), c(buf.data() + 2 * d, d);
            for (std::uint64_t i = 0; i < count; ++i) {
                TripleLabels t{};
                try {
                    t.label[0] = sampler.sample(rng, a);
                    t.label[1] = sampler.sample(rng, b);
                    t.label[2] = sampler.sample(rng, c);
                    t.cls = classify_triangle<T>(a, b, c, tol);
                } catch (...) {
                    detail::rethrow_with_index(first + i);
                }
                visit(t, acc);
            }
        });
}

/// Monte Carlo class frequencies of triangles drawn from `sampler`.
template <PointSampler S>
Estimate estimate(const S& sampler, std::uint64_t samples, std::uint64_t seed,
                  double tol = kDefaultTolerance, unsigned workers = 1,
                  std::uint64_t shard_size = SeedPolicy{}.shard_size, nlohmann::json spec = {}) {
    if (samples == 0) throw UsageError("samples must be at least 1");
    using T = typename S::value_type;
    const auto shards = sample_triples<ClassTally>(
        sampler, samples, SeedPolicy{seed, shard_size}, static_cast<T>(tol), workers,
        [](const TripleLabels& t, ClassTally& acc) { ++acc[static_cast<std::size_t>(t.cls)]; });
    ClassTally total{};
    for (const auto& s : shards) {
        for (std::size_t c = 0; c < 4; ++c) total[c] += s[c];
    }
    return make_estimate(total, seed, tol, std::move(spec));
}

}  // namespace obtuse

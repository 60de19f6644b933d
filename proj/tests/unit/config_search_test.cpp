#include "obtuse/config_search.hpp"
#include "obtuse/exact_bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace obtuse;

namespace {

Configuration random_configuration(Rng& rng, std::size_t n, int d) {
    std::vector<PointD> pts;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(static_cast<std::size_t>(d));
        for (auto& x : c) x = 2 * uniform01(rng) - 1;
        pts.emplace_back(std::move(c));
    }
    return Configuration(std::move(pts));
}

SearchParams quick(std::size_t n, int d, CountMode mode = CountMode::NonAcute) {
    SearchParams p;
    p.n = n;
    p.d = d;
    p.mode = mode;
    p.iterations = 4000;
    p.restarts = 4;
    p.seed = 2024;
    return p;
}

}  // namespace

TEST(LemmaBounds, RandomPlanarConfigurations) {
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 4 + trial % 7;
        const auto cfg = random_configuration(rng, n, 2);
        ASSERT_GE(count_nonacute(cfg), closed_form_2d(n)) << trial;
    }
}

TEST(LemmaBounds, RandomSpatialConfigurations) {
    Rng rng(32);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 6 + trial % 5;
        const auto cfg = random_configuration(rng, n, 3);
        ASSERT_GE(count_nonacute(cfg), closed_form_3d(n)) << trial;
    }
}

TEST(SearchMin, FourPlanarPoints) {
    const auto r = search_min(quick(4, 2));
    EXPECT_EQ(r.best_count, 1u);
    ASSERT_TRUE(r.bound.has_value());
    EXPECT_EQ(*r.bound, 1);
    EXPECT_EQ(*r.gap, 0);
    EXPECT_EQ(r.counts.nonacute(), 1);
}

TEST(SearchMin, StrictModeReachesZeroAtSquareAndOctahedron) {
    EXPECT_EQ(search_min(quick(4, 2, CountMode::StrictObtuse)).best_count, 0u);
    EXPECT_EQ(search_min(quick(6, 3, CountMode::StrictObtuse)).best_count, 0u);
}

TEST(SearchMin, SixSpatialPointsNeverBelowOne) {
    const auto r = search_min(quick(6, 3));
    EXPECT_GE(r.best_count, 1u);
}

TEST(SearchMin, SevenPlanarPointsBeatHeptagon) {
    auto p = quick(7, 2);
    p.iterations = 20'000;
    const auto r = search_min(p);
    EXPECT_GE(r.best_count, 11u);
    EXPECT_LE(r.best_count, 21u);
    EXPECT_EQ(r.restarts[0].start, "regular_polygon");
}

TEST(SearchMin, NeverBelowBoundSmallN) {
    for (int d : {2, 3}) {
        for (std::size_t n = 3; n <= 12; ++n) {
            auto p = quick(n, d);
            p.iterations = 1500;
            p.restarts = 2;
            p.workers = 0;
            const auto r = search_min(p);
            if (r.bound) {
                EXPECT_GE(BigCount(r.best_count), *r.bound) << n << " " << d;
            }
            EXPECT_EQ(r.counts.total(), binomial3(n));
        }
    }
}

TEST(SearchMin, BestSoFarIsMonotone) {
    const auto r = search_min(quick(8, 2));
    for (std::size_t i = 1; i < r.best_so_far.size(); ++i) EXPECT_LE(r.best_so_far[i], r.best_so_far[i - 1]);
    EXPECT_EQ(r.best_so_far.back(), r.best_count);
}

TEST(SearchMin, ReproducibleAcrossWorkerCounts) {
    auto p = quick(7, 3);
    p.workers = 1;
    const auto a = search_min(p);
    p.workers = 4;
    const auto b = search_min(p);
    EXPECT_EQ(a.best_count, b.best_count);
    EXPECT_EQ(a.best_restart, b.best_restart);
    ASSERT_EQ(a.best.size(), b.best.size());
    for (std::size_t i = 0; i < a.best.size(); ++i) EXPECT_EQ(a.best[i], b.best[i]);
}

TEST(SearchMin, Validation) {
    auto p = quick(2, 2);
    EXPECT_THROW(search_min(p), UsageError);
    p = quick(4, 1);
    EXPECT_THROW(search_min(p), UsageError);
    p = quick(4, 2);
    p.cooling = 1.5;
    EXPECT_THROW(search_min(p), UsageError);
}

TEST(RecognizeRational, SimpleFractions) {
    EXPECT_EQ(*recognize_rational(0.0), Rational(0));
    EXPECT_EQ(*recognize_rational(0.5), Rational(1, 2));
    EXPECT_EQ(*recognize_rational(0.1), Rational(1, 10));
    EXPECT_EQ(*recognize_rational(-2.0 / 3.0), Rational(-2, 3));
    EXPECT_EQ(*recognize_rational(12345.0 / 999'983.0), Rational(12345, 999'983));
    EXPECT_FALSE(recognize_rational(std::sqrt(2.0)).has_value());
    EXPECT_FALSE(recognize_rational(0.623489802).has_value());
}

TEST(EnumerateExact, NamedConfigurations) {
    const auto sq = enumerate_exact(Configuration({PointD{0, 0}, PointD{1, 0}, PointD{1, 1}, PointD{0, 1}}));
    EXPECT_TRUE(sq.exact);
    EXPECT_EQ(sq.counts[TriangleClass::Obtuse], 0);
    EXPECT_EQ(sq.counts[TriangleClass::Right], 4);

    const auto oct = enumerate_exact(Configuration({PointD{1, 0, 0}, PointD{-1, 0, 0}, PointD{0, 1, 0},
                                                    PointD{0, -1, 0}, PointD{0, 0, 1}, PointD{0, 0, -1}}));
    EXPECT_TRUE(oct.exact);
    EXPECT_EQ(oct.counts[TriangleClass::Obtuse], 0);
    EXPECT_EQ(oct.counts[TriangleClass::Right], 12);
    EXPECT_EQ(oct.counts[TriangleClass::Acute], 8);
}

TEST(EnumerateExact, HeptagonFallsBackToTolerance) {
    std::vector<PointD> pts;
    for (int i = 0; i < 7; ++i) {
        const double t = 2 * std::numbers::pi * i / 7;
        pts.push_back({std::round(std::cos(t) * 1e9) / 1e9, std::round(std::sin(t) * 1e9) / 1e9});
    }
    const auto e = enumerate_exact(Configuration(pts));
    EXPECT_FALSE(e.exact);
    EXPECT_EQ(e.counts[TriangleClass::Obtuse], 21);
}

TEST(EnumerateExact, ExactCollinearIsDegenerate) {
    const auto e = enumerate_exact(Configuration({PointD{0, 0}, PointD{0.1, 0.2}, PointD{0.3, 0.6}}));
    EXPECT_TRUE(e.exact);
    EXPECT_EQ(e.counts[TriangleClass::Degenerate], 1);
}

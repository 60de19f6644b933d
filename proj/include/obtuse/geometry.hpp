#pragma once

#include "obtuse/big.hpp"
#include "obtuse/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace obtuse {

/// Point in R^d, d >= 2, finite coordinates.
template <std::floating_point T>
class Point {
public:
    using value_type = T;

    Point() = default;

    explicit Point(std::vector<T> coords) : coords_(std::move(coords)) { validate(); }

    Point(std::initializer_list<T> coords) : coords_(coords) { validate(); }

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] std::span<const T> coords() const noexcept { return coords_; }
    [[nodiscard]] T operator[](std::size_t i) const { return coords_[i]; }
    T& operator[](std::size_t i) { return coords_[i]; }

    template <std::floating_point U>
    [[nodiscard]] Point<U> cast() const {
        std::vector<U> out(coords_.begin(), coords_.end());
        return Point<U>(std::move(out));
    }

    friend bool operator==(const Point&, const Point&) = default;

private:
    void validate() const {
        if (coords_.size() < 2) throw UsageError("point dimension must be at least 2");
        for (T c : coords_) {
            if (!std::isfinite(c)) throw UsageError("point coordinate is not finite");
        }
    }

    std::vector<T> coords_;
};

using PointD = Point<double>;

enum class TriangleClass : std::uint8_t { Acute = 0, Right = 1, Obtuse = 2, Degenerate = 3 };

inline constexpr std::array<TriangleClass, 4> kAllClasses{
    TriangleClass::Acute, TriangleClass::Right, TriangleClass::Obtuse, TriangleClass::Degenerate};

inline constexpr std::string_view to_string(TriangleClass c) noexcept {
    switch (c) {
        case TriangleClass::Acute: return "acute";
        case TriangleClass::Right: return "right";
        case TriangleClass::Obtuse: return "obtuse";
        case TriangleClass::Degenerate: return "degenerate";
    }
    return "?";
}

inline constexpr double kDefaultTolerance = 1e-12;

/// Per-class triangle counts.
struct ClassCounts {
    std::array<BigCount, 4> by_class{};

    [[nodiscard]] const BigCount& operator[](TriangleClass c) const {
        return by_class[static_cast<std::size_t>(c)];
    }
    BigCount& operator[](TriangleClass c) { return by_class[static_cast<std::size_t>(c)]; }

    [[nodiscard]] BigCount total() const {
        return by_class[0] + by_class[1] + by_class[2] + by_class[3];
    }
    /// Right + Obtuse + Degenerate.
    [[nodiscard]] BigCount nonacute() const { return by_class[1] + by_class[2] + by_class[3]; }

    friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

namespace detail {

// (2*area)^2 as a sum of squared 2x2 minors of the edge vectors at one vertex.
// Slower than the Lagrange form but free of its catastrophic cancellation.
template <std::floating_point T>
T gram_by_minors(std::span<const T> p, std::span<const T> q, std::span<const T> r) {
    const std::size_t d = p.size();
    T sum = 0;
    for (std::size_t i = 0; i < d; ++i) {
        const T ui = q[i] - p[i];
        const T vi = r[i] - p[i];
        for (std::size_t j = i + 1; j < d; ++j) {
            const T m = ui * (r[j] - p[j]) - (q[j] - p[j]) * vi;
            sum += m * m;
        }
    }
    return sum;
}

}  // namespace detail

/// Dot-product classification of the triangle (a, b, c).
///
/// `tol` is relative to the largest squared edge length. A triangle whose
/// area is at most tol*scale is Degenerate; otherwise a vertex dot product
/// within tol*scale of zero makes it Right; a negative one makes it Obtuse.
/// Symmetric in the three arguments.
template <std::floating_point T>
TriangleClass classify_triangle(std::span<const T> a, std::span<const T> b, std::span<const T> c,
                                T tol = static_cast<T>(kDefaultTolerance)) {
    const std::size_t d = a.size();
    if (b.size() != d || c.size() != d) throw UsageError("triangle vertices differ in dimension");
    if (!(tol >= 0)) throw UsageError("tolerance must be nonnegative");

    T e_ab = 0, e_ac = 0, e_bc = 0, uv = 0, uw = 0, vw = 0;
    for (std::size_t i = 0; i < d; ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]) || !std::isfinite(c[i]))
            throw UsageError("triangle vertex has a non-finite coordinate");
        const T u = b[i] - a[i];
        const T v = c[i] - a[i];
        const T w = c[i] - b[i];
        e_ab += u * u;
        e_ac += v * v;
        e_bc += w * w;
        uv += u * v;
        uw += u * w;
        vw += v * w;
    }
    const T dot_a = uv;
    const T dot_b = -uw;
    const T dot_c = vw;

    const T scale = std::max({e_ab, e_ac, e_bc});
    const T threshold = tol * scale;

    T gram = std::max({e_ab * e_ac - dot_a * dot_a, e_ab * e_bc - dot_b * dot_b,
                       e_ac * e_bc - dot_c * dot_c});
    const T product = std::max({e_ab * e_ac, e_ab * e_bc, e_ac * e_bc});
    if (gram <= 64 * std::numeric_limits<T>::epsilon() * product) {
        gram = std::max({detail::gram_by_minors(a, b, c), detail::gram_by_minors(b, c, a),
                         detail::gram_by_minors(c, a, b)});
    }
    const T area = std::sqrt(std::max(gram, T(0))) / 2;
    if (area <= threshold) return TriangleClass::Degenerate;

    if (std::abs(dot_a) <= threshold || std::abs(dot_b) <= threshold ||
        std::abs(dot_c) <= threshold)
        return TriangleClass::Right;
    if (dot_a < 0 || dot_b < 0 || dot_c < 0) return TriangleClass::Obtuse;
    return TriangleClass::Acute;
}

template <std::floating_point T>
TriangleClass classify_triangle(const Point<T>& a, const Point<T>& b, const Point<T>& c,
                                T tol = static_cast<T>(kDefaultTolerance)) {
    return classify_triangle<T>(a.coords(), b.coords(), c.coords(), tol);
}

/// n >= 3 pairwise distinct points of a common dimension.
template <std::floating_point T>
class BasicConfiguration {
public:
    explicit BasicConfiguration(std::vector<Point<T>> points) : points_(std::move(points)) {
        if (points_.size() < 3) throw UsageError("configuration needs at least 3 points");
        const std::size_t d = points_.front().dim();
        for (const auto& p : points_) {
            if (p.dim() != d) throw UsageError("configuration points differ in dimension");
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            for (std::size_t j = i + 1; j < points_.size(); ++j) {
                if (points_[i] == points_[j])
                    throw UsageError("configuration contains identical points " +
                                     std::to_string(i) + " and " + std::to_string(j));
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return points_.front().dim(); }
    [[nodiscard]] const Point<T>& operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] std::span<const Point<T>> points() const noexcept { return points_; }

    /// Replace one point. Used by local search; keeps the distinctness invariant.
    void replace(std::size_t i, Point<T> p) {
        if (p.dim() != dim()) throw UsageError("replacement point has the wrong dimension");
        for (std::size_t j = 0; j < points_.size(); ++j) {
            if (j != i && points_[j] == p) throw UsageError("replacement duplicates a point");
        }
        points_[i] = std::move(p);
    }

private:
    std::vector<Point<T>> points_;
};

using Configuration = BasicConfiguration<double>;

/// Counts of every class over all C(n,3) triples.
template <std::floating_point T>
ClassCounts count_classes(const BasicConfiguration<T>& config,
                          T tol = static_cast<T>(kDefaultTolerance)) {
    std::array<std::uint64_t, 4> tally{};
    const std::size_t n = config.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                const auto cls = classify_triangle(config[i], config[j], config[k], tol);
                ++tally[static_cast<std::size_t>(cls)];
            }
        }
    }
    ClassCounts out;
    for (std::size_t c = 0; c < 4; ++c) out.by_class[c] = tally[c];
    return out;
}

/// Right + Obtuse + Degenerate triples.
template <std::floating_point T>
BigCount count_nonacute(const BasicConfiguration<T>& config,
                        T tol = static_cast<T>(kDefaultTolerance)) {
    return count_classes(config, tol).nonacute();
}

}  // namespace obtuse

#pragma once

#include "obtuse/errors.hpp"
#include "obtuse/geometry.hpp"
#include "obtuse/quadrature.hpp"
#include "obtuse/random.hpp"
#include "obtuse/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace obtuse {

namespace detail {

inline void check_sphere_dim(int d) {
    if (d < 2) throw UsageError("sphere dimension must be at least 2, got " + std::to_string(d));
}

}  // namespace detail

/// Probability that a third uniform point on S_{d-1} makes an obtuse
/// triangle with two points at angle theta.
inline double obtuse_given_angle(double theta, int d) {
    detail::check_sphere_dim(d);
    if (!(theta >= 0 && theta <= std::numbers::pi))
        throw UsageError("angle must lie in [0, pi]");
    const double a = 0.5 * (d - 1);
    const double s = std::sin(0.5 * theta);
    const double c = std::cos(0.5 * theta);
    return 0.5 * reg_inc_beta(s * s, a, 0.5) + reg_inc_beta(c * c, a, 0.5);
}

/// Integral of sin^{d-2} over [0, pi].
inline double angle_normalizer(int d) {
    detail::check_sphere_dim(d);
    if (d == 2) return std::numbers::pi;
    return std::sqrt(std::numbers::pi) * std::exp(log_gamma(0.5 * (d - 1)) - log_gamma(0.5 * d));
}

/// Density of the angle between two independent uniform points on S_{d-1}.
inline double angle_density(double theta, int d) {
    if (d == 2) return 1.0 / std::numbers::pi;
    return std::pow(std::sin(theta), d - 2) / angle_normalizer(d);
}

struct SphereProbability {
    double value = 0;
    double error = 0;
    std::size_t evaluations = 0;
};

/// Obtuse probability for three uniform points on S_{d-1}, by quadrature.
inline SphereProbability obtuse_prob_sphere_detailed(int d, double tol = 1e-10) {
    detail::check_sphere_dim(d);
    if (!(tol > 0)) throw UsageError("tolerance must be positive");
    const double norm = angle_normalizer(d);
    auto integrand = [d](double theta) {
        const double w = d == 2 ? 1.0 : std::pow(std::sin(theta), d - 2);
        return w == 0 ? 0.0 : obtuse_given_angle(theta, d) * w;
    };
    QuadratureOptions opt;
    opt.abs_tol = 0.5 * tol * norm;
    const auto q = integrate(integrand, 0.0, std::numbers::pi, opt);
    return {q.value / norm, q.error / norm, q.evaluations};
}

inline double obtuse_prob_sphere(int d, double tol = 1e-10) {
    return obtuse_prob_sphere_detailed(d, tol).value;
}

/// (3/2) I_{1/2}((d-1)/2, 1/2).
inline double asymptotic_sphere(int d) {
    detail::check_sphere_dim(d);
    return 1.5 * reg_inc_beta(0.5, 0.5 * (d - 1), 0.5);
}

/// Writes a uniform point of S_{d-1} into `out` (d = out.size()).
template <std::floating_point T>
void sample_sphere_into(std::span<T> out, Rng& rng) {
    std::normal_distribution<double> normal;
    for (;;) {
        double norm2 = 0;
        for (auto& x : out) {
            const double g = normal(rng);
            x = static_cast<T>(g);
            norm2 += g * g;
        }
        if (norm2 > 0) {
            const T inv = static_cast<T>(1) / std::sqrt(static_cast<T>(norm2));
            for (auto& x : out) x *= inv;
            return;
        }
    }
}

inline PointD sample_sphere(int d, Rng& rng) {
    detail::check_sphere_dim(d);
    std::vector<double> coords(static_cast<std::size_t>(d));
    sample_sphere_into<double>(coords, rng);
    return PointD(std::move(coords));
}

/// Uniform points on S_{d-1}, for the Monte Carlo engine.
struct SphereSampler {
    using value_type = double;
    int d = 3;

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(d); }
    std::uint32_t sample(Rng& rng, std::span<double> out) const {
        sample_sphere_into<double>(out, rng);
        return 0;
    }
};

}  // namespace obtuse

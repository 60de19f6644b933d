#pragma once

#include "obtuse/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace obtuse {

/// ln Gamma(x) for x > 0 (Lanczos, g = 607/128, 15 terms).
inline double log_gamma(double x) {
    if (!(x > 0) || !std::isfinite(x)) {
        std::ostringstream msg;
        msg << "log_gamma needs a finite x > 0, got " << x;
        throw UsageError(msg.str());
    }
    if (x < 0.5) return log_gamma(x + 1) - std::log(x);

    static constexpr double g = 607.0 / 128.0;
    static constexpr std::array<double, 15> c{
        0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
        14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
        .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
        -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
        .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

    if (x == 1.0 || x == 2.0) return 0.0;
    const double z = x - 1;
    double sum = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) sum += c[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    return 0.5 * std::log(2 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

/// ln B(a, b).
inline double log_beta(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace detail {

// Continued fraction for I_z(a,b) by the modified Lentz method; valid for
// z < (a+1)/(a+b+2).
inline double beta_continued_fraction(double z, double a, double b, int max_iter) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 4 * std::numeric_limits<double>::epsilon();
    const double qab = a + b;
    const double qap = a + 1;
    const double qam = a - 1;
    double c = 1;
    double d = 1 - qab * z / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * z / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1) <= eps) return h;
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "incomplete beta continued fraction did not converge in " << max_iter
        << " iterations (z=" << z << ", a=" << a << ", b=" << b << ")";
    throw NumericalError(msg.str());
}

}  // namespace detail

inline constexpr int kBetaMaxIterations = 10000;

/// Regularized incomplete beta I_z(a, b). z is clamped to [0, 1].
inline double reg_inc_beta(double z, double a, double b, int max_iter = kBetaMaxIterations) {
    if (!(a > 0) || !(b > 0) || !std::isfinite(a) || !std::isfinite(b)) {
        std::ostringstream msg;
        msg << "reg_inc_beta needs finite a, b > 0, got a=" << a << ", b=" << b;
        throw UsageError(msg.str());
    }
    if (std::isnan(z)) throw UsageError("reg_inc_beta got z = NaN");
    if (z <= 0) return 0.0;
    if (z >= 1) return 1.0;

    const double log_front = a * std::log(z) + b * std::log1p(-z) - log_beta(a, b);
    if (z > (a + 1) / (a + b + 2)) {
        const double front = std::exp(log_front) / b;
        return 1.0 - front * detail::beta_continued_fraction(1 - z, b, a, max_iter);
    }
    const double front = std::exp(log_front) / a;
    return front * detail::beta_continued_fraction(z, a, b, max_iter);
}

}  // namespace obtuse

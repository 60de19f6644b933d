#pragma once

#include "obtuse/errors.hpp"

#include <cmath>

namespace obtuse {

/// Acute probability x(p) of the self-similar construction: the solution of
/// x = 3(1-p)p^2 + (1-p)^3 x + (5/9)p^3.
inline double fixed_point_acute(double p) {
    if (!(p > 0 && p < 1)) throw UsageError("cap mass p must lie in (0, 1)");
    const double q = 1 - p;
    return (3 * q * p * p + 5.0 / 9.0 * p * p * p) / (1 - q * q * q);
}

/// |x - (3(1-p)p^2 + (1-p)^3 x + (5/9)p^3)|.
inline double fixed_point_residual(double p, double x) {
    const double q = 1 - p;
    return std::abs(x - (3 * q * p * p + q * q * q * x + 5.0 / 9.0 * p * p * p));
}

/// Sign-carrying part of dx/dp: N'D - ND' for x = N/D with
/// N = 3p - (22/9)p^2 and D = 3 - 3p + p^2 (x with p cancelled).
inline double fixed_point_slope_numerator(double p) {
    const double n = 3 * p - 22.0 / 9.0 * p * p;
    const double dn = 3 - 44.0 / 9.0 * p;
    const double den = 3 - 3 * p + p * p;
    const double dden = -3 + 2 * p;
    return dn * den - n * dden;
}

struct FixedPointResult {
    double p = 0;
    double x = 0;
    double obtuse = 0;
    double bracket = 0;
    int iterations = 0;
};

/// Maximizes fixed_point_acute over (0, 1) by bisection on the sign of its
/// slope, to the given bracket width.
inline FixedPointResult maximize_acute(double bracket_width = 1e-12) {
    if (!(bracket_width > 0)) throw UsageError("bracket width must be positive");
    double lo = 1e-9;
    double hi = 1 - 1e-9;
    if (!(fixed_point_slope_numerator(lo) > 0 && fixed_point_slope_numerator(hi) < 0))
        throw InvariantViolation("fixed-point objective is not unimodal on the search bracket");
    FixedPointResult r;
    while (hi - lo > bracket_width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (fixed_point_slope_numerator(mid) > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++r.iterations;
    }
    r.p = 0.5 * (lo + hi);
    r.x = fixed_point_acute(r.p);
    r.obtuse = 1 - r.x;
    r.bracket = hi - lo;
    return r;
}

/// The maximizing cap mass, by bisection.
inline double optimal_cap_mass() {
    static const double p = maximize_acute().p;
    return p;
}

}  // namespace obtuse

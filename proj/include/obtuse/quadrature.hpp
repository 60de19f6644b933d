#pragma once

#include "obtuse/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace obtuse {

struct QuadratureResult {
    double value = 0;
    double error = 0;
    std::size_t evaluations = 0;
};

/// Thrown when the evaluation budget runs out; carries the best estimate so far.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : NumericalError(what), best_(best) {}
    [[nodiscard]] const QuadratureResult& best() const noexcept { return best_; }

private:
    QuadratureResult best_;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0;
    std::size_t max_evaluations = 2'000'000;
};

namespace detail {

struct KronrodPanel {
    double kronrod;
    double gauss;
};

// 7-point Gauss / 15-point Kronrod pair on [lo, hi].
template <typename F>
KronrodPanel gauss_kronrod_15(F& f, double lo, double hi) {
    static constexpr std::array<double, 8> xk{
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr std::array<double, 8> wk{
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg{
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(mid);
    double k = wk[7] * fc;
    double g = wg[3] * fc;
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * xk[i];
        const double s = f(mid - dx) + f(mid + dx);
        k += wk[i] * s;
        if (i % 2 == 1) g += wg[i / 2] * s;
    }
    return {k * half, g * half};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [lo, hi].
///
/// Panels are bisected depth-first, left half first, and each half inherits
/// half of its parent's absolute tolerance, so the refinement tree depends
/// only on f and the options.
template <typename F>
QuadratureResult integrate(F&& f, double lo, double hi, QuadratureOptions opt = {}) {
    if (!(opt.abs_tol > 0) && !(opt.rel_tol > 0))
        throw UsageError("integrate needs a positive tolerance");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw UsageError("integration bounds not finite");
    if (lo == hi) return {};
    if (hi < lo) {
        auto r = integrate(f, hi, lo, opt);
        r.value = -r.value;
        return r;
    }

    struct Panel {
        double lo, hi, tol;
    };
    QuadratureResult total;
    std::vector<Panel> stack{{lo, hi, opt.abs_tol}};
    // A rough whole-interval estimate scales the relative tolerance.
    double scale = 0;
    bool scale_known = false;
    bool budget_hit = false;

    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const auto panel = detail::gauss_kronrod_15(f, p.lo, p.hi);
        total.evaluations += 15;
        if (!std::isfinite(panel.kronrod)) {
            std::ostringstream msg;
            msg << "integrand not finite on [" << p.lo << ", " << p.hi << "]";
            throw QuadratureError(msg.str(), total);
        }
        if (!scale_known) {
            scale = std::abs(panel.kronrod);
            scale_known = true;
        }
        const double err = std::abs(panel.kronrod - panel.gauss);
        const double width_share = (p.hi - p.lo) / (hi - lo);
        const double allowed = std::max(p.tol, opt.rel_tol * scale * width_share);
        const double mid = 0.5 * (p.lo + p.hi);
        const bool tiny = !(p.lo < mid && mid < p.hi);
        if (err <= allowed || tiny || budget_hit) {
            total.value += panel.kronrod;
            total.error += err;
            continue;
        }
        if (total.evaluations >= opt.max_evaluations) {
            budget_hit = true;
            total.value += panel.kronrod;
            total.error += err;
            continue;
        }
        stack.push_back({mid, p.hi, 0.5 * p.tol});
        stack.push_back({p.lo, mid, 0.5 * p.tol});
    }

    if (budget_hit) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "quadrature budget of " << opt.max_evaluations
            << " evaluations exhausted; best estimate " << total.value << " +/- " << total.error;
        throw QuadratureError(msg.str(), total);
    }
    return total;
}

}  // namespace obtuse

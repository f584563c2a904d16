#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature on finite intervals. Panels are
// kept in a max-heap by error estimate and the worst panel is bisected until
// the summed estimate meets max(abs_tol, rel_tol * |value|).

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "bch/errors.hpp"

namespace bch {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 200000;
};

struct QuadOutcome {
    double value = 0;
    double error = 0;  // summed panel estimates
    long evaluations = 0;
    int panels = 0;
};

namespace detail {

// 15-point Kronrod nodes (positive half) with K15 weights; Gauss-7 weights sit
// on the odd-index nodes.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
void gk15(F&& f, double a, double b, double& k15, double& err) {
    const double mid = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double fc = f(mid);
    double g7 = kWg[3] * fc;
    k15 = kWgk[7] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = hl * kXgk[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        k15 += kWgk[i] * fsum;
        if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
    }
    k15 *= hl;
    g7 *= hl;
    err = std::fabs(k15 - g7);
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

template <class F>
QuadOutcome adaptive_gk(F&& f, double a, double b, const QuadOptions& opt = {}) {
    QuadOutcome out;
    if (a == b) return out;

    std::priority_queue<detail::Panel> heap;
    double value, error;
    detail::gk15(f, a, b, value, error);
    out.evaluations += 15;
    heap.push({a, b, value, error});
    double total_value = value, total_error = error;
    out.panels = 1;

    while (total_error > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total_value))) {
        if (out.panels >= opt.max_panels) {
            std::ostringstream msg;
            msg << "quadrature tolerance not met: value ~ " << total_value
                << ", error estimate " << total_error << " after " << out.panels
                << " panels";
            throw ToleranceError(msg.str());
        }
        const detail::Panel worst = heap.top();
        heap.pop();
        total_value -= worst.value;
        total_error -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at ulp resolution; accept its estimate as-is
            total_value += worst.value;
            total_error += worst.error;
            break;
        }
        for (const auto& [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            detail::gk15(f, lo, hi, value, error);
            out.evaluations += 15;
            heap.push({lo, hi, value, error});
            total_value += value;
            total_error += error;
        }
        ++out.panels;
    }
    out.value = total_value;
    out.error = total_error;
    return out;
}

// Bracketed root solve: Newton iteration guarded by bisection on [lo, hi];
// requires f(lo) and f(hi) to straddle zero.
template <class F, class DF>
double solve_bracketed(F&& fval, DF&& fderiv, double lo, double hi,
                       double x0, double xtol, int max_iter = 200) {
    double flo = fval(lo);
    double fhi = fval(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw BracketError("root solve: endpoints do not straddle zero");
    double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const double fx = fval(x);
        if (fx == 0) return x;
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo < xtol) return 0.5 * (lo + hi);
        const double d = fderiv(x);
        double xn = x - fx / d;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // Newton left the bracket
        x = xn;
    }
    return x;
}

}  // namespace bch

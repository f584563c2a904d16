#include "bch/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bch/parallel.hpp"
#include "bch/quadrature.hpp"

namespace bch {

namespace {

// (1-z)^e without cancellation near z = 0
double pow1mz(double z, double e) { return std::exp(e * std::log1p(-z)); }

// D(z) = gamma A - z B scaled: gamma a2(z) - z b3(z); positive inside the
// loop, zero at the turning point, negative beyond.
double level_gap(const Kernel& kern, double gamma, double z) {
    const KernelReduced r = kern.reduced(z);
    return gamma * r.a2 - z * r.b3;
}

double level_gap_prime(const Kernel& kern, double gamma, double z) {
    const KernelReduced r = kern.reduced(z);
    return gamma * (r.ap1 - 2.0 * r.a2) / z - (r.bp2 - 2.0 * r.b3);
}

double turning_point_impl(const Kernel& kern, double gamma) {
    // Monotonicity probe: A/B - h must change sign exactly once. The geometry
    // guarantees it but it is not proved in general; detect instead of assume.
    constexpr int kProbe = 128;
    double lo = 0, hi = 0;
    int changes = 0;
    double z_prev = 1e-9;
    double g_prev = level_gap(kern, gamma, z_prev);
    for (int j = 1; j <= kProbe; ++j) {
        const double z = static_cast<double>(j) / (kProbe + 1);
        const double g = level_gap(kern, gamma, z);
        if ((g_prev > 0) != (g > 0)) {
            if (changes++ == 0) {
                lo = z_prev;
                hi = z;
            }
        }
        z_prev = z;
        g_prev = g;
    }
    {
        const double z = 1.0 - 1e-12;
        const double g = level_gap(kern, gamma, z);
        if ((g_prev > 0) != (g > 0)) {
            if (changes++ == 0) {
                lo = z_prev;
                hi = z;
            }
        }
    }
    if (changes != 1) {
        std::ostringstream msg;
        msg << "turning point: level gap changed sign " << changes
            << " times on the probe grid (b = " << kern.b()
            << ", gamma = " << gamma << ")";
        throw BracketError(msg.str());
    }
    double z = solve_bracketed(
        [&](double t) { return level_gap(kern, gamma, t); },
        [&](double t) { return level_gap_prime(kern, gamma, t); }, lo, hi,
        0.5 * (lo + hi), 1e-15);
    // Newton polish to pin the level-equation residual
    for (int it = 0; it < 3; ++it) {
        const double g = level_gap(kern, gamma, z);
        const double gp = level_gap_prime(kern, gamma, z);
        const double step = g / gp;
        if (!std::isfinite(step)) break;
        z -= step;
        if (std::fabs(step) < 1e-16 * z) break;
    }
    const double resid = std::fabs(kern.phi_ratio(z) - 1.0 / gamma);
    if (!(resid <= 1e-11 / gamma)) {
        std::ostringstream msg;
        msg << "turning point residual " << resid << " exceeds tolerance at b = "
            << kern.b() << ", gamma = " << gamma;
        throw BracketError(msg.str());
    }
    return z;
}

// Upper branch of Gamma_h with z recovered from the level equation.
struct GammaH {
    const Kernel& kern;
    double h;
    double z_t;

    // Solves A/B = t for t >= h, i.e. a2(z) - t z b3(z) = 0 on (0, z_t].
    double z_of_target(double t) const {
        if (t <= h) return z_t;
        const double b = kern.b();
        auto psi = [&](double z) {
            const KernelReduced r = kern.reduced(z);
            return r.a2 - t * z * r.b3;
        };
        auto psi_prime = [&](double z) {
            const KernelReduced r = kern.reduced(z);
            return (r.ap1 - 2.0 * r.a2) / z - t * (r.bp2 - 2.0 * r.b3);
        };
        double lo = std::min(0.9 * tail_coefficient(b) / t, 0.5 * z_t);
        while (psi(lo) <= 0) lo *= 0.5;
        double guess = tail_coefficient(b) / t;
        if (!(guess > lo && guess < z_t)) guess = 0.5 * (lo + z_t);
        return solve_bracketed(psi, psi_prime, lo, z_t, guess, 1e-16 * z_t);
    }
};

// Integrals over ubar in [0, inf): direct panel on [0, u1] plus the tail
// folded by ubar = 1/v onto (0, 1/u1].
template <class G>
QuadOutcome ubar_integral(const GammaH& curve, G&& g_of_z, double tol) {
    constexpr double kSplit = 10.0;
    QuadOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = tol;
    auto direct = [&](double u) { return g_of_z(curve.z_of_target(curve.h + u * u)); };
    auto folded = [&](double v) {
        if (v < 1e-150) return 0.0;
        const double u = 1.0 / v;
        return g_of_z(curve.z_of_target(curve.h + u * u)) / (v * v);
    };
    QuadOutcome head = adaptive_gk(direct, 0.0, kSplit, opt);
    QuadOutcome tail = adaptive_gk(folded, 0.0, 1.0 / kSplit, opt);
    head.value += tail.value;
    head.error += tail.error;
    head.evaluations += tail.evaluations;
    head.panels += tail.panels;
    return head;
}

// g(z): the Q / I2' integrand of the ubar route (positive on (0, z_t)).
struct QIntegrand {
    const Kernel& kern;
    double operator()(double z) const {
        const double b = kern.b();
        const KernelReduced r = kern.reduced(z);
        return r.a2 * r.b3 * std::sqrt(r.b3) * z * z * std::sqrt(z) /
               (2.0 * std::sqrt(b * (b - 1.0)) * r.f3 *
                pow1mz(z, 1.5 * (b - 1.0)));
    }
};

// Combined I1' integrand: the (H1) and (H2) contributions share the prefactor
// z^{5/2} / (2 (b(b-1))^{3/2} (1-z)^{5(b-1)/2}); both terms are positive.
struct I1Integrand {
    const Kernel& kern;
    double operator()(double z) const {
        const double b = kern.b();
        const KernelReduced r = kern.reduced(z);
        const double pre = z * z * std::sqrt(z) /
                           (2.0 * std::pow(b * (b - 1.0), 1.5) *
                            pow1mz(z, 2.5 * (b - 1.0)));
        const double sb3 = std::sqrt(r.b3);
        const double t1 = r.a2 * r.b3 * r.b3 * sb3 * r.p4 / (r.f3 * r.f3 * r.f3);
        const double t2 = r.a2 * r.a2 * r.b3 * sb3 * r.r3 / (r.f3 * r.f3);
        return pre * (t1 + t2);
    }
};

}  // namespace

double turning_point_x(const WaveParams& p) {
    const Kernel kern(p.b);
    const double x = turning_point_impl(kern, p.gamma);
    if (!(x > center_x(p) && x < 1.0))
        throw BracketError("turning point left (2 gamma/(b+1), 1)");
    return x;
}

double turning_point_z(double b, double h) {
    if (!(h > 1.0)) throw DomainError("turning point requires h > 1");
    const Kernel kern(b);
    return turning_point_impl(kern, 1.0 / h);
}

CurveIntegral q_via_x(const WaveParams& p, double tol) {
    const Kernel kern(p.b);
    const double b = p.b, gamma = p.gamma;
    const double x_max = turning_point_impl(kern, gamma);
    const double dslope = -level_gap_prime(kern, gamma, x_max);
    const double scale = -2.0 * std::sqrt(b * (b - 1.0));
    auto integrand = [&](double s) {
        const double x = x_max - s * s;
        const KernelReduced r = kern.reduced(x);
        double gap = gamma * r.a2 - x * r.b3;
        if (gap <= 0 || s * s < 1e-12 * x_max) gap = dslope * s * s;
        return scale * r.a2 * x * pow1mz(x, -0.5 * (b + 1.0)) * s /
               std::sqrt(gap);
    };
    QuadOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = tol;
    const QuadOutcome out = adaptive_gk(integrand, 0.0, std::sqrt(x_max), opt);
    CurveIntegral ci;
    ci.value = out.value;
    ci.abs_error_estimate = out.error;
    ci.turning_point = x_max;
    ci.route = Route::x_route;
    ci.evaluations = out.evaluations;
    return ci;
}

CurveIntegral q_via_ubar(double b, double h, double tol) {
    if (!(h > 1.0)) throw DomainError("q_via_ubar requires h > 1");
    const Kernel kern(b);
    const GammaH curve{kern, h, turning_point_impl(kern, 1.0 / h)};
    const QuadOutcome out = ubar_integral(curve, QIntegrand{kern}, tol);
    CurveIntegral ci;
    ci.value = -2.0 * std::sqrt(h) * out.value;
    ci.abs_error_estimate = 2.0 * std::sqrt(h) * out.error;
    ci.turning_point = curve.z_t;
    ci.route = Route::ubar_route;
    ci.evaluations = out.evaluations;
    return ci;
}

CurveIntegral i1_prime(double b, double h, double tol) {
    if (!(h > 1.0)) throw DomainError("i1_prime requires h > 1");
    const Kernel kern(b);
    const GammaH curve{kern, h, turning_point_impl(kern, 1.0 / h)};
    const QuadOutcome out = ubar_integral(curve, I1Integrand{kern}, tol);
    CurveIntegral ci;
    ci.value = out.value;
    ci.abs_error_estimate = out.error;
    ci.turning_point = curve.z_t;
    ci.route = Route::ubar_route;
    ci.evaluations = out.evaluations;
    return ci;
}

CurveIntegral i2_prime(double b, double h, double tol) {
    if (!(h > 1.0)) throw DomainError("i2_prime requires h > 1");
    const Kernel kern(b);
    const GammaH curve{kern, h, turning_point_impl(kern, 1.0 / h)};
    const QuadOutcome out = ubar_integral(curve, QIntegrand{kern}, tol);
    CurveIntegral ci;
    ci.value = out.value;
    ci.abs_error_estimate = out.error;
    ci.turning_point = curve.z_t;
    ci.route = Route::ubar_route;
    ci.evaluations = out.evaluations;
    return ci;
}

double q_derivative_fd(double b, double h, double tol) {
    // Q(h) varies on the scale h-1 near the peakon end, so the Richardson
    // step must shrink with it; at delta/(h-1) = 0.01 the fourth-order
    // truncation stays below 1e-5 even for the steep large-b boundary layer.
    const double delta = std::min(0.005 * h, 0.01 * (h - 1.0));
    auto q = [&](double hh) { return q_via_ubar(b, hh, tol).value; };
    const double d1 = q(h + delta) - q(h - delta);
    const double d2 = q(h + 2.0 * delta) - q(h - 2.0 * delta);
    return (8.0 * d1 - d2) / (12.0 * delta);
}

MonotonicityReport monotonicity_scan(double b, double c,
                                     const std::vector<double>& k_grid,
                                     double tol) {
    if (k_grid.size() < 3)
        throw DomainError("monotonicity scan needs at least 3 grid points");
    MonotonicityReport rep;
    rep.b = b;
    rep.c = c;
    rep.tol = tol;
    rep.rows.resize(k_grid.size());
    parallel_for(k_grid.size(), [&](std::size_t i) {
        const WaveParams p = make_params(b, c, k_grid[i]);
        MonotonicityRow row;
        row.k = p.k;
        row.gamma = p.gamma;
        row.h = p.h;
        row.Q = q_via_ubar(b, p.h, tol).value;
        row.i1p = i1_prime(b, p.h, tol).value;
        row.i2p = i2_prime(b, p.h, tol).value;
        row.dQdh_fd = 0;
        row.margin = 0;
        rep.rows[i] = row;
    });
    auto& rows = rep.rows;
    const std::size_t n = rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = (i == 0) ? 0 : i - 1;
        const std::size_t z = (i == n - 1) ? n - 1 : i + 1;
        rows[i].dQdh_fd = (rows[z].Q - rows[a].Q) / (rows[z].h - rows[a].h);
    }
    rep.pass = true;
    rep.min_i1p = rows[0].i1p;
    rep.min_dq = rows[1].Q - rows[0].Q;
    for (std::size_t i = 0; i < n; ++i) {
        const double dq_fwd =
            (i + 1 < n) ? rows[i + 1].Q - rows[i].Q : rows[i].Q - rows[i - 1].Q;
        rows[i].margin = std::min(rows[i].i1p, dq_fwd);
        rep.min_i1p = std::min(rep.min_i1p, rows[i].i1p);
        if (i + 1 < n) rep.min_dq = std::min(rep.min_dq, rows[i + 1].Q - rows[i].Q);
        if (!(rows[i].i1p > 0) || !(rows[i].dQdh_fd > 0) || !(dq_fwd > 0))
            rep.pass = false;
    }
    return rep;
}

GridReport hypothesis_grid_check(const std::vector<double>& b_grid,
                                 const std::vector<double>& z_grid) {
    GridReport rep;
    rep.nodes = b_grid.size() * z_grid.size();
    std::vector<std::vector<GridViolation>> per_row(b_grid.size());
    parallel_for(b_grid.size(), [&](std::size_t i) {
        const Kernel kern(b_grid[i]);
        for (double z : z_grid) {
            const KernelReduced r = kern.reduced(z);
            if (!(r.r3 > 0) || !(r.p4 > 0))
                per_row[i].push_back({b_grid[i], z, r.r3, r.p4});
        }
    });
    for (auto& row : per_row)
        rep.violations.insert(rep.violations.end(), row.begin(), row.end());
    rep.pass = rep.violations.empty();
    return rep;
}

std::vector<PhasePoint> level_curve_samples_xy(const WaveParams& p, int n) {
    if (n < 2) throw DomainError("level curve sampling needs n >= 2");
    const Kernel kern(p.b);
    const double x_max = turning_point_impl(kern, p.gamma);
    const double gb = p.gamma * p.b * (p.b - 1.0);
    std::vector<PhasePoint> pts(n);
    for (int i = 0; i < n; ++i) {
        // cluster samples toward both endpoints
        const double t = std::sin(0.5 * M_PI * i / (n - 1.0));
        const double x = x_max * t * t;
        double y = 0;
        if (i == 0) {
            pts[i] = {0.0, 0.0};  // saddle
            continue;
        }
        if (i < n - 1) {
            const KernelReduced r = kern.reduced(x);
            const double gap = std::max(0.0, p.gamma * r.a2 - x * r.b3);
            y = x * std::sqrt(gap / gb);
        }
        pts[i] = {(i == n - 1) ? x_max : x, y};
    }
    return pts;
}

std::vector<PhasePoint> level_curve_samples_zu(double b, double h, int n) {
    if (n < 2) throw DomainError("level curve sampling needs n >= 2");
    const Kernel kern(b);
    const GammaH curve{kern, h, turning_point_impl(kern, 1.0 / h)};
    constexpr double kUbarMax = 10.0;  // saddle-side limit of the plot window
    std::vector<PhasePoint> pts(n);
    for (int i = 0; i < n; ++i) {
        const double u = kUbarMax * (1.0 - static_cast<double>(i) / (n - 1.0));
        const double z = curve.z_of_target(h + u * u);
        pts[i] = {z, u};
    }
    return pts;
}

}  // namespace bch

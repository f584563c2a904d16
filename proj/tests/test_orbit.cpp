#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bch/orbit.hpp"
#include "bch/quadrature.hpp"

using namespace bch;

namespace {
double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}
}  // namespace

TEST_CASE("turning point closed forms at b = 2") {
    // the level equation factors as 2 x^2 (gamma - x) = 0, so x_max = gamma
    const WaveParams p1 = make_params(2.0, 1.0, 0.25);
    CHECK(rel_err(turning_point_x(p1), 1.0 / 3.0) < 1e-12);
    const WaveParams p2 = make_params(2.0, 1.0, 1.0 / 21.0);  // gamma = 0.9
    CHECK(rel_err(p2.gamma, 0.9) < 1e-14);
    CHECK(rel_err(turning_point_x(p2), 0.9) < 1e-12);
    // A/B = 1/z, so z_t = 1/h
    CHECK(rel_err(turning_point_z(2.0, 2.0), 0.5) < 1e-12);
    CHECK(rel_err(turning_point_z(2.0, 10.0), 0.1) < 1e-12);
}

TEST_CASE("turning point exceeds the center abscissa") {
    for (double b : {1.2, 2.0, 3.5, 8.0}) {
        for (double k_frac : {0.1, 0.5, 0.9}) {
            const WaveParams p = make_params(b, 1.0, k_frac / (b + 1.0));
            const double x_max = turning_point_x(p);
            CHECK(x_max > center_x(p));
            CHECK(x_max < 1.0);
        }
    }
}

TEST_CASE("turning points of the two coordinate systems coincide") {
    for (double b : {1.5, 3.0, 6.0}) {
        for (double h : {1.2, 2.0, 5.0}) {
            const double gamma = 1.0 / h;
            const double k = (1.0 - gamma) / ((b + 1.0) - gamma);  // c = 1
            const WaveParams p = make_params(b, 1.0, k);
            CHECK(rel_err(p.h, h) < 1e-12);
            CHECK(rel_err(turning_point_x(p), turning_point_z(b, h)) < 1e-10);
        }
    }
}

TEST_CASE("small-amplitude limit: x_max ~ 3 gamma/(b+1)") {
    for (double b : {2.0, 4.0}) {
        const WaveParams p = make_params(b, 1.0, 0.999 / (b + 1.0));
        const double ratio = turning_point_x(p) / (3.0 * p.gamma / (b + 1.0));
        CHECK(std::fabs(ratio - 1.0) < 0.01);
    }
}

TEST_CASE("Q is negative on both routes") {
    const WaveParams p = make_params(2.0, 1.0, 0.25);
    const CurveIntegral qx = q_via_x(p);
    CHECK(qx.value < 0);
    CHECK(qx.route == Route::x_route);
    CHECK(qx.turning_point > center_x(p));
    CHECK(qx.evaluations > 0);
    CHECK(qx.abs_error_estimate <= 1e-10 * std::fabs(qx.value));
    const CurveIntegral qu = q_via_ubar(2.0, 3.0);
    CHECK(qu.value < 0);
    CHECK(qu.route == Route::ubar_route);
    CHECK(qu.evaluations > 0);
}

TEST_CASE("route equivalence on frozen points") {
    {
        const WaveParams p = make_params(2.0, 1.0, 0.25);  // h = 3
        const double qx = q_via_x(p).value;
        const double qu = q_via_ubar(2.0, 3.0).value;
        CHECK(rel_err(qx, qu) < 1e-6);
    }
    {
        // b = 3, h = 2 -> gamma = 1/2, k = (1-1/2)/(4-1/2) = 1/7
        const WaveParams p = make_params(3.0, 1.0, 1.0 / 7.0);
        CHECK(rel_err(p.h, 2.0) < 1e-14);
        const double qx = q_via_x(p).value;
        const double qu = q_via_ubar(3.0, 2.0).value;
        CHECK(rel_err(qx, qu) < 1e-6);
    }
}

TEST_CASE("route equivalence across a parameter sweep") {
    for (double b : {1.5, 2.5, 4.0, 10.0}) {
        for (double h : {1.2, 2.0, 6.0}) {
            const double gamma = 1.0 / h;
            const double k = (1.0 - gamma) / ((b + 1.0) - gamma);
            const WaveParams p = make_params(b, 1.0, k);
            const double qx = q_via_x(p).value;
            const double qu = q_via_ubar(b, h).value;
            CHECK(rel_err(qx, qu) < 1e-6);
        }
    }
}

TEST_CASE("I2' identity: (1/2) h^{-1/2} Q + I2' = 0 with Q from the x route") {
    for (double b : {1.5, 2.0, 3.0, 7.0}) {
        for (double h : {1.3, 2.0, 4.0}) {
            const double gamma = 1.0 / h;
            const double k = (1.0 - gamma) / ((b + 1.0) - gamma);
            const WaveParams p = make_params(b, 1.0, k);
            const double q = q_via_x(p).value;
            const double i2 = i2_prime(b, h).value;
            CHECK(i2 > 0);
            CHECK(std::fabs(0.5 * q / std::sqrt(h) + i2) < 1e-6 * i2);
        }
    }
}

TEST_CASE("I1' is positive and matches the finite difference of Q") {
    for (double b : {1.5, 2.0, 3.0, 10.0}) {
        for (double h : {1.5, 3.0, 8.0}) {
            const double i1 = i1_prime(b, h).value;
            CHECK(i1 > 0);
            const double fd = q_derivative_fd(b, h);
            // h^{1/2} dQ/dh = I1'
            CHECK(rel_err(std::sqrt(h) * fd, i1) < 1e-4);
        }
    }
}

TEST_CASE("quadrature reports tolerance failure instead of a silent result") {
    QuadOptions opt;
    opt.rel_tol = 1e-14;
    opt.abs_tol = 0;
    opt.max_panels = 4;  // far too few for the kink
    auto kink = [](double x) { return std::sqrt(std::fabs(x - 0.3141)); };
    CHECK_THROWS_AS(adaptive_gk(kink, 0.0, 1.0, opt), ToleranceError);
}

TEST_CASE("tolerance honesty") {
    const double loose_tol = 1e-6;
    const CurveIntegral loose = q_via_ubar(2.5, 2.0, loose_tol);
    const CurveIntegral tight = q_via_ubar(2.5, 2.0, loose_tol / 2.0);
    CHECK(std::fabs(tight.value - loose.value) <= loose.abs_error_estimate);
    CHECK(loose.abs_error_estimate <= loose_tol * std::fabs(loose.value));
}

TEST_CASE("tail of the Gamma_h integrand decays like ubar^-5 at b = 2") {
    // measured log-slope of the Q integrand between ubar = 20 and 40
    const double h = 2.0;
    auto g_at = [&](double u) {
        // reconstruct the integrand through the public pieces: use I2' over
        // truncated windows via level samples is overkill; use z(u) from the
        // level curve instead.
        const Kernel kern(2.0);
        const double z = 1.0 / (h + u * u);  // exact at b = 2
        const KernelReduced r = kern.reduced(z);
        return r.a2 * std::pow(r.b3, 1.5) * std::pow(z, 2.5) /
               (2.0 * std::sqrt(2.0) * r.f3 * std::pow(1.0 - z, 1.5));
    };
    const double slope = std::log(g_at(40.0) / g_at(20.0)) / std::log(2.0);
    CHECK(std::fabs(slope + 5.0) < 0.05);
}

TEST_CASE("tail coefficient: z * ubar^2 -> 3/(b+1) on Gamma_h") {
    for (double b : {2.0, 3.0, 5.0}) {
        const auto pts = level_curve_samples_zu(b, 2.0, 200);
        const auto& far = pts.front();  // largest ubar
        CHECK(std::fabs(far.x * far.y * far.y - tail_coefficient(b)) <
              0.05 * tail_coefficient(b));
    }
    CHECK(tail_coefficient(2.0) == doctest::Approx(1.0));
}

TEST_CASE("monotonicity scan passes on the classical cases") {
    std::vector<double> ks;
    for (int i = 1; i <= 8; ++i) ks.push_back(i / 9.0 / 3.0);  // inside (0, 1/3)
    const MonotonicityReport rep = monotonicity_scan(2.0, 1.0, ks, 1e-9);
    CHECK(rep.pass);
    CHECK(rep.min_i1p > 0);
    CHECK(rep.min_dq > 0);
    CHECK(rep.rows.size() == ks.size());
    for (const auto& row : rep.rows) {
        CHECK(row.i1p > 0);
        CHECK(row.dQdh_fd > 0);
    }
}

TEST_CASE("monotonicity scan near the b -> 1 boundary") {
    std::vector<double> ks;
    const double sup = 1.0 / 2.01;
    for (int i = 1; i <= 5; ++i) ks.push_back(sup * i / 6.0);
    const MonotonicityReport rep = monotonicity_scan(1.01, 1.0, ks, 1e-9);
    CHECK(rep.pass);
    CHECK(rep.min_i1p > 0);
}

TEST_CASE("hypothesis grid check") {
    std::vector<double> bs, zs;
    for (int i = 0; i < 20; ++i) bs.push_back(1.1 + i * (10.0 - 1.1) / 19.0);
    for (int j = 1; j <= 50; ++j) zs.push_back(j / 51.0);
    const GridReport rep = hypothesis_grid_check(bs, zs);
    CHECK(rep.pass);
    CHECK(rep.nodes == bs.size() * zs.size());
    CHECK(rep.violations.empty());
}

TEST_CASE("level curve samples satisfy their level equations") {
    const WaveParams p = make_params(2.5, 1.0, 0.2);
    const auto xy = level_curve_samples_xy(p, 64);
    REQUIRE(xy.size() == 64);
    CHECK(xy.front().x == 0.0);  // saddle-side limit
    CHECK(xy.front().y == 0.0);
    CHECK(rel_err(xy.back().x, turning_point_x(p)) < 1e-10);
    CHECK(xy.back().y == 0.0);
    const double level = homoclinic_level(p);
    for (const auto& pt : xy) {
        const double H = first_integral_normalized(pt.x, pt.y, p);
        CHECK(std::fabs(H - level) < 1e-10 * std::fabs(level));
    }

    const auto zu = level_curve_samples_zu(2.0, 2.0, 64);
    CHECK(rel_err(zu.back().x, 0.5) < 1e-10);  // turning point z_t = 1/h
    for (const auto& pt : zu) {
        // closed form at b = 2: ubar = sqrt(1/z - 2)
        CHECK(std::fabs(pt.y - std::sqrt(1.0 / pt.x - 2.0)) < 1e-8);
        const double H = first_integral_transformed(pt.x, pt.y, 2.0);
        CHECK(std::fabs(H - 2.0) < 1e-10 * 2.0);
    }
}

TEST_CASE("Q continuous in k at interior points") {
    // Q(k0 + delta) -> Q(k0) linearly as delta -> 0. (A refinement study
    // toward k = 0 itself shows |Q| growing without bound -- the peakon limit
    // -- so continuity is asserted at interior k, not at the excluded
    // boundary.)
    const double k0 = 0.1;
    const WaveParams p0 = make_params(2.0, 1.0, k0);
    const double q0 = q_via_x(p0).value;
    double prev_jump = 0;
    bool first = true;
    for (double delta : {4e-3, 2e-3, 1e-3, 5e-4}) {
        const WaveParams p = make_params(2.0, 1.0, k0 + delta);
        const double jump = std::fabs(q_via_x(p).value - q0);
        if (!first) {
            CHECK(jump < prev_jump);
            CHECK(jump > 0.3 * prev_jump);  // ~linear, not erratic
        }
        prev_jump = jump;
        first = false;
    }
}

TEST_CASE("Q grows without bound toward the peakon limit k -> 0+") {
    double prev = 0;
    for (double k : {0.02, 0.01, 0.005}) {
        const WaveParams p = make_params(2.0, 1.0, k);
        const double q = q_via_x(p).value;
        CHECK(q < prev);  // more and more negative
        prev = q;
    }
}

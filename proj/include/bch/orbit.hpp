#pragma once

// Level-curve quadrature along the homoclinic orbit / Gamma_h: turning points,
// the stability functional Q by two independent routes, the derivative
// integrals I1' and I2', monotonicity scans and the (H1)/(H2) sign grids.

#include <string>
#include <vector>

#include "bch/kernel.hpp"

namespace bch {

enum class Route { x_route, ubar_route };

struct CurveIntegral {
    double value = 0;
    double abs_error_estimate = 0;
    double turning_point = 0;
    Route route = Route::x_route;
    long evaluations = 0;
};

// Rightmost intersection of the homoclinic loop with y = 0; solves
// gamma A(x) = x B(x) ... i.e. A/B = h on (2 gamma/(b+1), 1).
double turning_point_x(const WaveParams& p);

// Turning point of Gamma_h: A(z_t)/B(z_t) = h. Same curve in z = x coordinates.
double turning_point_z(double b, double h);

// Q along the homoclinic orbit parametrized by x with the turning-point
// square-root singularity removed by x = x_max - s^2. Strictly negative.
CurveIntegral q_via_x(const WaveParams& p, double tol = 1e-10);

// Q = -2 h^{1/2} int_0^inf g(z(ubar)) d ubar over the upper branch of Gamma_h,
// z(ubar) recovered per node by a guarded Newton solve of A/B = h + ubar^2;
// the tail is folded to a finite interval by ubar -> 1/v. Independent of the
// x route in parametrization and singularity handling.
CurveIntegral q_via_ubar(double b, double h, double tol = 1e-10);

// The two derivative integrals of the Q calculus: I1'(h) = h^{1/2} dQ/dh > 0
// and I2'(h) = -(1/2) h^{-1/2} Q > 0.
CurveIntegral i1_prime(double b, double h, double tol = 1e-10);
CurveIntegral i2_prime(double b, double h, double tol = 1e-10);

// Richardson-extrapolated centered difference of Q(h) (ubar route).
double q_derivative_fd(double b, double h, double tol = 1e-10);

struct MonotonicityRow {
    double k, gamma, h;
    double Q;
    double dQdh_fd;  // centered difference on the scan grid (one-sided at ends)
    double i1p, i2p;
    double margin;  // min(i1p, forward Q difference)
};

struct MonotonicityReport {
    double b = 0, c = 0;
    double tol = 0;
    std::vector<MonotonicityRow> rows;
    bool pass = false;
    double min_i1p = 0;
    double min_dq = 0;  // smallest forward difference of Q along the grid
};

// Q(k) strictly increasing across the grid and I1' > 0 at every mapped h.
MonotonicityReport monotonicity_scan(double b, double c,
                                     const std::vector<double>& k_grid,
                                     double tol = 1e-10);

struct GridViolation {
    double b, z, r3, p4;
};

struct GridReport {
    std::size_t nodes = 0;
    std::vector<GridViolation> violations;
    bool pass = false;
};

// R < 0 and P > 0 on the grid, checked through the scaled quantities
// -R/z^3 and P/z^4 (exact sign at the degenerate zero z = 0).
GridReport hypothesis_grid_check(const std::vector<double>& b_grid,
                                 const std::vector<double>& z_grid);

struct PhasePoint {
    double x, y;
};

// n samples of the upper branch, from the saddle-side limit to the turning
// point. Each satisfies its level equation to ~1e-12 relative.
std::vector<PhasePoint> level_curve_samples_xy(const WaveParams& p, int n);
std::vector<PhasePoint> level_curve_samples_zu(double b, double h, int n);

}  // namespace bch

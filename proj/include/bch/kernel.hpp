#pragma once

// Scalar kernel of the traveling-wave analysis for the b-family
// Camassa-Holm equation. Provides the level-curve functions
//
//   A(z) = 2(1-z)^{b-1} + 2(b-1) z (1-z)^{b-1} - 2
//   B(z) = A(z) + b(b-1) z^2 (1-z)^{b-1}
//   f(z) = 2 - 2(1-z)^b - (b+1) z - (b-1) z (1-z)^b
//
// with derivatives, the sign combinations
//
//   R(z) = (1/2) z (1-z) B' + (1/2)(b-1) z B - (1-z) B      (negative on (0,1))
//   P(z) = 2 (1-z) A' f + (b-1) A f - (1-z) A f'            (positive on (0,1))
//   l(z) = (b-1)^3 z^2 + (12b-4)(1-z)
//
// the first integrals of the two planar systems, their vector fields, and the
// validated parameter bundle (b, c, k) -> (gamma, h).
//
// A, B, f all vanish to second/third order at z = 0, where their closed forms
// cancel catastrophically; below a b-dependent threshold they are evaluated by
// truncated binomial series of the scaled quantities -A/z^2, -B/z^3, -f/z^3.

#include <array>

#include "bch/errors.hpp"

namespace bch {

// Validated parameter bundle: gamma = (c - k(b+1))/(c - k) in (0,1), h = 1/gamma.
struct WaveParams {
    double b = 0, c = 0, k = 0;
    double gamma = 0, h = 0;
};

// Validates b > 1 (with a safety margin, factors (b-1) divide the analysis),
// c > 0 and 0 < k < c/(b+1). Throws DomainError naming the violated bound.
WaveParams make_params(double b, double c, double k, double min_b_excess = 1e-3);

struct KernelValues {
    double A, Ap, App;
    double B, Bp, Bpp;
    double f, fp;  // fp = (b+1) A / 2
};

// Scaled kernel values, all strictly positive on (0,1):
//   a2 = -A/z^2, b3 = -B/z^3, f3 = -f/z^3, ap1 = -A'/z, bp2 = -B'/z^2,
//   r3 = -R/z^3, p4 = P/z^4, nu = (1-z)^{b-1}.
// These stay O(1)-conditioned at both endpoints and feed the curve integrals.
struct KernelReduced {
    double a2, b3, f3, ap1, bp2, r3, p4, nu;
};

class Kernel {
  public:
    explicit Kernel(double b);

    double b() const { return b_; }

    KernelValues eval(double z) const;      // requires 0 < z < 1
    KernelReduced reduced(double z) const;  // requires 0 < z < 1

    // A/B = a2 / (z b3); strictly decreasing from +inf to 1 on (0,1).
    // Scaled limits at z -> 0+: a2 -> b(b-1), b3 -> b(b-1)(b+1)/3,
    // f3 -> b(b-1)(b+1)/6, r3 -> b(b-1)(b+1)/6, p4 -> b^2(b+1)(b-1)^2/6.
    double phi_ratio(double z) const;
    // d(A/B)/dz = 2 b(b-1) z (1-z)^{b-2} f / B^2  (< 0 on (0,1))
    double phi_ratio_prime(double z) const;

  private:
    static constexpr int kMaxTerms = 40;

    void series(double z, double& a2, double& b3, double& f3) const;

    double b_;
    double z_series_;  // series/closed-form switch point
    int n_terms_;
    std::array<double, kMaxTerms> sa_{}, sb_{}, sf_{};
};

// One-shot helpers (construct a Kernel internally).
KernelValues eval_kernel(double z, double b);
double eval_R(double z, double b);  // defined for z in [0,1]
double eval_P(double z, double b);
double eval_l(double z, double b);

// The same combinations evaluated through their expanded (z, nu) polynomial forms
// with nu = (1-z)^{b-1}; used to pin the coefficient conventions against the
// defining combinations above.
double eval_R_nu_form(double z, double b);
double eval_P_nu_form(double z, double b);

// First integral of the normalized planar system,
//   Hbar(x,y) = (1-x)^{b-1} (2(1-gamma) + 2(1-gamma)(b-1)x + b(b-1)x^2)
//               / (gamma b (b-1)) - y^2,   x < 1.
double first_integral_normalized(double x, double y, const WaveParams& p);

// Level of the homoclinic loop: Hbar at the saddle (0,0).
double homoclinic_level(const WaveParams& p);

// Center abscissa 2 gamma / (b+1).
double center_x(const WaveParams& p);

// First integral of the transformed system, H(z, ubar) = A/B - ubar^2, z in (0,1).
double first_integral_transformed(double z, double ubar, double b);

struct Deriv2 {
    double first, second;
};

// Right-hand sides of the two planar systems.
Deriv2 vector_field_normalized(double x, double y, const WaveParams& p);
Deriv2 vector_field_transformed(double z, double ubar, double b);

// Leading coefficient of the Gamma_h tail: z * ubar^2 -> 3/(b+1) as ubar -> inf
// on the level curve. (Local analysis of A/B at z = 0; at b = 2 the constant
// is exactly 1.)
inline double tail_coefficient(double b) { return 3.0 / (b + 1.0); }

}  // namespace bch

#include "bch/kernel.hpp"

#include <cmath>
#include <sstream>

namespace bch {

WaveParams make_params(double b, double c, double k, double min_b_excess) {
    std::ostringstream msg;
    if (!(b > 1.0 + min_b_excess)) {
        msg << "b = " << b << " violates b > 1 (enforced margin b >= 1 + "
            << min_b_excess << ")";
        throw DomainError(msg.str());
    }
    if (!(c > 0.0)) {
        msg << "c = " << c << " violates c > 0";
        throw DomainError(msg.str());
    }
    const double k_sup = c / (b + 1.0);
    if (!(k > 0.0) || !(k < k_sup)) {
        msg << "k = " << k << " violates 0 < k < c/(b+1) = " << k_sup;
        throw DomainError(msg.str());
    }
    WaveParams p;
    p.b = b;
    p.c = c;
    p.k = k;
    p.gamma = (c - k * (b + 1.0)) / (c - k);
    p.h = 1.0 / p.gamma;
    return p;
}

Kernel::Kernel(double b) : b_(b) {
    if (!(b > 1.0)) throw DomainError("kernel requires b > 1");
    // Binomial tails grow before decaying once (b-1) z approaches 1; keep the
    // series region small enough that terms decay from the start.
    z_series_ = std::min(0.1, 0.5 / b);
    // beta_m = binom(b-1, m), delta_m = binom(b, m); at loop entry the running
    // values hold order m-1.
    double beta = b - 1.0, delta = b;
    n_terms_ = kMaxTerms;
    for (int j = 0; j < kMaxTerms; ++j) {
        const int m = j + 2;
        const double beta_m = beta * (b - m) / m;
        const double delta_m = delta * (b - m + 1.0) / m;
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        // A_m = 2 (-1)^m (beta_m - (b-1) beta_{m-1});  sa stores -A_{j+2}
        sa_[j] = -2.0 * sgn * (beta_m - (b - 1.0) * beta);
        // B_{m+1} = A_{m+1} + b(b-1) (-1)^{m+1} beta_{m-1}; sb stores -B_{j+3}
        const double A_m1 = 2.0 * (-sgn) * (beta_m * (b - m - 1.0) / (m + 1.0) -
                                            (b - 1.0) * beta_m);
        sb_[j] = -(A_m1 + b * (b - 1.0) * (-sgn) * beta);
        // f_{m+1} = (-1)^{m+1} ((b-1) delta_m - 2 delta_{m+1}); sf stores -f_{j+3}
        const double delta_m1 = delta_m * (b - m) / (m + 1.0);
        sf_[j] = -(-sgn) * ((b - 1.0) * delta_m - 2.0 * delta_m1);
        beta = beta_m;
        delta = delta_m;
    }
}

void Kernel::series(double z, double& a2, double& b3, double& f3) const {
    a2 = sa_[0];
    b3 = sb_[0];
    f3 = sf_[0];
    double zj = 1.0;
    for (int j = 1; j < n_terms_; ++j) {
        zj *= z;
        const double ta = sa_[j] * zj;
        const double tb = sb_[j] * zj;
        const double tf = sf_[j] * zj;
        a2 += ta;
        b3 += tb;
        f3 += tf;
        if (std::fabs(ta) < 1e-18 * std::fabs(a2) &&
            std::fabs(tb) < 1e-18 * std::fabs(b3) &&
            std::fabs(tf) < 1e-18 * std::fabs(f3))
            break;
    }
}

KernelReduced Kernel::reduced(double z) const {
    if (!(z > 0.0 && z < 1.0)) throw DomainError("kernel argument outside (0,1)");
    const double b = b_;
    const double l1 = std::log1p(-z);
    KernelReduced r;
    r.nu = std::exp((b - 1.0) * l1);
    if (std::fabs(z) < z_series_) {
        series(z, r.a2, r.b3, r.f3);
    } else {
        const double A = 2.0 * std::expm1((b - 1.0) * l1 + std::log1p((b - 1.0) * z));
        const double B = A + b * (b - 1.0) * z * z * r.nu;
        const double w = std::exp(b * l1);  // (1-z)^b
        const double f = 2.0 - 2.0 * w - (b + 1.0) * z - (b - 1.0) * z * w;
        r.a2 = -A / (z * z);
        r.b3 = -B / (z * z * z);
        r.f3 = -f / (z * z * z);
    }
    const double num2 = r.nu / (1.0 - z);  // (1-z)^{b-2}
    r.ap1 = 2.0 * b * (b - 1.0) * num2;
    r.bp2 = b * (b - 1.0) * (b + 1.0) * num2;
    r.r3 = 0.5 * (1.0 - z) * r.bp2 + (0.5 * (b - 1.0) * z - (1.0 - z)) * r.b3;
    r.p4 = 2.0 * (1.0 - z) * r.ap1 * r.f3 + (b - 1.0) * r.a2 * r.f3 * z -
           0.5 * (b + 1.0) * (1.0 - z) * r.a2 * r.a2;
    return r;
}

KernelValues Kernel::eval(double z) const {
    const KernelReduced r = reduced(z);
    const double b = b_;
    const double z2 = z * z, z3 = z2 * z;
    KernelValues v;
    v.A = -r.a2 * z2;
    v.Ap = -r.ap1 * z;
    v.B = -r.b3 * z3;
    v.Bp = -r.bp2 * z2;
    v.f = -r.f3 * z3;
    v.fp = 0.5 * (b + 1.0) * v.A;
    const double num3 = r.nu / ((1.0 - z) * (1.0 - z));  // (1-z)^{b-3}
    v.App = 2.0 * b * (b - 1.0) * ((b - 1.0) * z - 1.0) * num3;
    v.Bpp = b * (b - 1.0) * (b + 1.0) * z * (b * z - 2.0) * num3;
    return v;
}

double Kernel::phi_ratio(double z) const {
    const KernelReduced r = reduced(z);
    return r.a2 / (z * r.b3);
}

double Kernel::phi_ratio_prime(double z) const {
    const KernelReduced r = reduced(z);
    // 2 b(b-1) z (1-z)^{b-2} f / B^2 with f = -f3 z^3, B^2 = b3^2 z^6
    return -2.0 * b_ * (b_ - 1.0) * r.nu / (1.0 - z) * r.f3 /
           (r.b3 * r.b3 * z * z);
}

KernelValues eval_kernel(double z, double b) { return Kernel(b).eval(z); }

double eval_R(double z, double b) {
    if (z == 0.0) return 0.0;
    if (z == 1.0) return 1.0 - b;
    return -Kernel(b).reduced(z).r3 * z * z * z;
}

double eval_P(double z, double b) {
    if (z == 0.0) return 0.0;
    if (z == 1.0) return 2.0 * (b - 1.0) * (b - 1.0);
    return Kernel(b).reduced(z).p4 * z * z * z * z;
}

double eval_l(double z, double b) {
    return (b - 1.0) * (b - 1.0) * (b - 1.0) * z * z +
           (12.0 * b - 4.0) * (1.0 - z);
}

double eval_R_nu_form(double z, double b) {
    const double nu = std::exp((b - 1.0) * std::log1p(-z));
    return nu * ((b - 1.0) * z * z + (3.0 - b) * z - 2.0) - (b + 1.0) * z + 2.0;
}

double eval_P_nu_form(double z, double b) {
    const double nu = std::exp((b - 1.0) * std::log1p(-z));
    const double c2 = 2.0 * (b - 1.0) * (b - 1.0) * z * z -
                      2.0 * (b * b - 5.0 * b + 2.0) * z - 6.0 * b + 2.0;
    const double c1 = 2.0 * b * (b - 1.0) * (b - 1.0) * z * z -
                      4.0 * (3.0 * b - 1.0) * z + 12.0 * b - 4.0;
    const double c0 = 2.0 * b * (b + 1.0) * z - 6.0 * b + 2.0;
    return (c2 * nu + c1) * nu + c0;
}

double first_integral_normalized(double x, double y, const WaveParams& p) {
    if (!(x < 1.0)) throw DomainError("normalized first integral: x = 1 is the singular line");
    const double b = p.b, g = p.gamma;
    const double nu = std::exp((b - 1.0) * std::log1p(-x));
    const double w = 2.0 * (1.0 - g) + 2.0 * (1.0 - g) * (b - 1.0) * x +
                     b * (b - 1.0) * x * x;
    return nu * w / (g * b * (b - 1.0)) - y * y;
}

double homoclinic_level(const WaveParams& p) {
    return 2.0 * (1.0 - p.gamma) / (p.gamma * p.b * (p.b - 1.0));
}

double center_x(const WaveParams& p) { return 2.0 * p.gamma / (p.b + 1.0); }

double first_integral_transformed(double z, double ubar, double b) {
    if (!(z > 0.0)) throw DomainError("transformed first integral: A/B diverges at z = 0");
    if (!(z < 1.0)) throw DomainError("transformed first integral: z = 1 is the singular line");
    return Kernel(b).phi_ratio(z) - ubar * ubar;
}

Deriv2 vector_field_normalized(double x, double y, const WaveParams& p) {
    if (!(x < 1.0)) throw DomainError("normalized field: x = 1 is the singular line");
    const double b = p.b;
    const double pw = std::exp((b - 2.0) * std::log1p(-x));  // (1-x)^{b-2}
    return {y, x * pw * (1.0 - (b + 1.0) * x / (2.0 * p.gamma))};
}

Deriv2 vector_field_transformed(double z, double ubar, double b) {
    if (!(z > 0.0 && z < 1.0)) throw DomainError("transformed field: z outside (0,1)");
    return {2.0 * ubar, Kernel(b).phi_ratio_prime(z)};
}

}  // namespace bch

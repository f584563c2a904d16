#include "bch/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bch/orbit.hpp"
#include "bch/spectral.hpp"

namespace bch {

namespace {

struct State2 {
    double phin, y;
};

// Right-hand side in the physical coordinate: d(phin)/dx and dy/dx.
struct OrbitField {
    double b, sqrt_gamma, inv_two_gamma_b1;
    State2 operator()(const State2& s) const {
        const double l1 = std::log1p(-s.phin);
        const double wm = std::exp(-0.5 * (b - 1.0) * l1);  // (1-phin)^{-(b-1)/2}
        const double wp = std::exp(0.5 * (b - 3.0) * l1);   // (1-phin)^{(b-3)/2}
        return {sqrt_gamma * wm * s.y,
                sqrt_gamma * wp * s.phin * (1.0 - s.phin * inv_two_gamma_b1)};
    }
};

// Dormand-Prince 5(4) step from x over width h.
template <class F>
State2 dp45_step(const F& f, const State2& s, double h, State2& err) {
    const State2 k1 = f(s);
    auto lin = [&](double c1, double c2, double c3, double c4, double c5,
                   double c6, const State2& a1, const State2& a2, const State2& a3,
                   const State2& a4, const State2& a5, const State2& a6) {
        return State2{s.phin + h * (c1 * a1.phin + c2 * a2.phin + c3 * a3.phin +
                                    c4 * a4.phin + c5 * a5.phin + c6 * a6.phin),
                      s.y + h * (c1 * a1.y + c2 * a2.y + c3 * a3.y + c4 * a4.y +
                                 c5 * a5.y + c6 * a6.y)};
    };
    const State2 z{0, 0};
    const State2 k2 = f(lin(1.0 / 5, 0, 0, 0, 0, 0, k1, z, z, z, z, z));
    const State2 k3 = f(lin(3.0 / 40, 9.0 / 40, 0, 0, 0, 0, k1, k2, z, z, z, z));
    const State2 k4 =
        f(lin(44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0, k1, k2, k3, z, z, z));
    const State2 k5 = f(lin(19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                            -212.0 / 729, 0, 0, k1, k2, k3, k4, z, z));
    const State2 k6 = f(lin(9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                            -5103.0 / 18656, 0, k1, k2, k3, k4, k5, z));
    const State2 y5 = lin(35.0 / 384, 0, 500.0 / 1113, 125.0 / 192,
                          -2187.0 / 6784, 11.0 / 84, k1, k2, k3, k4, k5, k6);
    const State2 k7 = f(y5);
    // embedded 4th-order solution
    const double b1 = 5179.0 / 57600, b3 = 7571.0 / 16695, b4 = 393.0 / 640,
                 b5 = -92097.0 / 339200, b6 = 187.0 / 2100, b7 = 1.0 / 40;
    const State2 y4{
        s.phin + h * (b1 * k1.phin + b3 * k3.phin + b4 * k4.phin + b5 * k5.phin +
                      b6 * k6.phin + b7 * k7.phin),
        s.y + h * (b1 * k1.y + b3 * k3.y + b4 * k4.y + b5 * k5.y + b6 * k6.y +
                   b7 * k7.y)};
    err = {y5.phin - y4.phin, y5.y - y4.y};
    return y5;
}

// Advance across [x0, x1] with adaptive steps clamped to the interval end.
template <class F>
State2 dp45_advance(const F& f, State2 s, double x0, double x1, double tol) {
    double x = x0;
    double h = x1 - x0;
    int rejected_in_a_row = 0;
    while (x < x1) {
        h = std::min(h, x1 - x);
        if (!(h > 1e-14 * (x1 - x0)))
            throw IntegrationError("profile integration: step size underflow");
        State2 err;
        const State2 trial = dp45_step(f, s, h, err);
        const double scale_a = tol * (1.0 + std::fabs(s.phin));
        const double scale_y = tol * (1.0 + std::fabs(s.y));
        const double en = std::sqrt(0.5 * ((err.phin / scale_a) * (err.phin / scale_a) +
                                           (err.y / scale_y) * (err.y / scale_y)));
        if (en <= 1.0) {
            x += h;
            s = trial;
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 60) {
            throw IntegrationError("profile integration: repeated step rejection");
        }
        const double grow = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
        h *= std::clamp(grow, 0.2, 5.0);
    }
    return s;
}

}  // namespace

WaveProfile build_profile(const WaveParams& p, const ProfileOptions& opt) {
    if (opt.n_half < 64) throw DomainError("profile grid needs n >= 64");
    if (!(opt.tol > 0)) throw DomainError("profile tolerance must be positive");
    const double sqrt_gamma = std::sqrt(p.gamma);
    double length = opt.half_length;
    if (length <= 0) length = 30.0 / sqrt_gamma;  // (phi(L)-k)/(phi(0)-k) < 1e-12

    const double x_max = turning_point_x(p);
    const OrbitField field{p.b, sqrt_gamma, (p.b + 1.0) / (2.0 * p.gamma)};

    const int n = opt.n_half;
    const double dx = length / n;
    std::vector<double> half_phin(n + 1), half_y(n + 1);
    half_phin[0] = x_max;
    half_y[0] = 0.0;
    State2 s{x_max, 0.0};
    const double level = homoclinic_level(p);
    double drift = 0.0;

    // The homoclinic connection has an unstable direction that amplifies
    // integration noise like e^{+sqrt(gamma) x}; a raw forward integration
    // rebounds long before the 1e-12 tail. Each accepted interval is
    // therefore projected back onto the exact level curve
    //   y = -phin sqrt((gamma a2 - phin b3) / (gamma b (b-1))),
    // which removes the curve-normal error; the remaining tangential error
    // does not grow. The projection stays off near the crest where the
    // square root is degenerate.
    const Kernel kern(p.b);
    const double gb = p.gamma * p.b * (p.b - 1.0);
    auto curve_y = [&](double phin) {
        if (phin < 1e-10) return -phin;  // saddle linearization, error O(phin^2)
        const KernelReduced r = kern.reduced(phin);
        const double gap = std::max(p.gamma * r.a2 - phin * r.b3, 0.0);
        return -phin * std::sqrt(gap / gb);
    };
    const double crest_guard = x_max * (1.0 - 1e-3);
    for (int i = 1; i <= n; ++i) {
        s = dp45_advance(field, s, (i - 1) * dx, i * dx, opt.tol);
        const double H = first_integral_normalized(s.phin, s.y, p);
        drift = std::max(drift, std::fabs(H - level) / std::fabs(level));
        if (s.phin < crest_guard && s.y < 0.0) s.y = curve_y(s.phin);
        half_phin[i] = s.phin;
        half_y[i] = s.y;
    }
    if (!(half_phin[n] < 1e-11 * x_max)) {
        std::ostringstream msg;
        msg << "profile tail not reached: phi_n(L) = " << half_phin[n]
            << " at L = " << length;
        throw IntegrationError(msg.str());
    }

    WaveProfile prof;
    prof.params = p;
    prof.half_length = length;
    prof.energy_drift = drift;
    const int n_full = 2 * n;
    prof.x.resize(n_full);
    prof.phi.resize(n_full);
    prof.phi_prime.resize(n_full);
    for (int j = 0; j < n_full; ++j) {
        const int i = std::abs(j - n);
        const double sign = (j < n) ? -1.0 : 1.0;
        prof.x[j] = (j - n) * dx;
        const double phin = half_phin[i];
        prof.phi[j] = p.k + (p.c - p.k) * phin;
        const double wm = std::exp(-0.5 * (p.b - 1.0) * std::log1p(-phin));
        prof.phi_prime[j] = sign * (p.c - p.k) * sqrt_gamma * wm * half_y[i];
        if (!(prof.phi[j] > p.k && prof.phi[j] < p.c))
            throw IntegrationError("profile left the band k < phi < c");
    }
    prof.mu = momentum_of(prof);
    for (double m : prof.mu)
        if (!(m > 0)) throw IntegrationError("momentum density lost positivity");
    prof.decay_exponent_fit = decay_fit(prof);
    return prof;
}

std::vector<double> momentum_of(const WaveProfile& profile) {
    const WaveParams& p = profile.params;
    const double rhs_const = p.c * p.k - 0.5 * (p.b + 1.0) * p.k * p.k;
    std::vector<double> mu(profile.phi.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const double phi = profile.phi[j];
        const double dphi = profile.phi_prime[j];
        if (!(p.c - phi > 0))
            throw DomainError("momentum: profile touches the wave speed c");
        mu[j] = (rhs_const - 0.5 * (p.b - 1.0) * (dphi * dphi - phi * phi)) /
                (p.c - phi);
    }
    return mu;
}

double ode_residual_fields(const WaveParams& p, const std::vector<double>& phi,
                           const std::vector<double>& phi_prime, double length) {
    Spectral sp(static_cast<int>(phi.size()), 2.0 * length);
    const auto phi_xx = sp.derivative(phi, 2);
    const double rhs_const = p.c * p.k - 0.5 * (p.b + 1.0) * p.k * p.k;
    double worst = 0;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        const double resid = (p.c - phi[j]) * (phi[j] - phi_xx[j]) +
                             0.5 * (p.b - 1.0) *
                                 (phi_prime[j] * phi_prime[j] - phi[j] * phi[j]) -
                             rhs_const;
        worst = std::max(worst, std::fabs(resid));
    }
    return worst;
}

double ode_residual(const WaveProfile& profile) {
    return ode_residual_fields(profile.params, profile.phi, profile.phi_prime,
                               profile.half_length);
}

double decay_fit(const WaveProfile& profile) {
    const WaveParams& p = profile.params;
    const std::size_t crest = profile.crest_index();
    const double amp = profile.phi[crest] - p.k;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t j = crest; j < profile.x.size(); ++j) {
        const double excess = profile.phi[j] - p.k;
        if (excess > 1e-3 * amp) continue;
        if (excess < 1e-7 * amp) break;
        const double lx = profile.x[j];
        const double ly = std::log(excess);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count < 16)
        throw IntegrationError(
            "decay fit: tail window too short (needs 4 decades of decay)");
    const double denom = count * sxx - sx * sx;
    const double slope = (count * sxy - sx * sy) / denom;
    return -slope;
}

nlohmann::json initial_condition_json(const WaveProfile& profile) {
    nlohmann::json j;
    j["b"] = profile.params.b;
    j["c"] = profile.params.c;
    j["k"] = profile.params.k;
    j["L"] = 2.0 * profile.half_length;  // periodic domain length
    j["N"] = profile.x.size();
    j["x0"] = profile.x.front();
    j["x"] = profile.x;
    j["phi"] = profile.phi;
    j["phi_prime"] = profile.phi_prime;
    j["mu"] = profile.mu;
    return j;
}

}  // namespace bch

#pragma once

// Physical solitary-wave profiles phi(x), phi'(x) and the momentum density
// mu = phi - phi'' reconstructed from the normalized homoclinic orbit. The
// orbit is launched at the turning point (the crest, a regular point) and
// integrated outward in the physical coordinate with an adaptive embedded
// Runge-Kutta pair landing exactly on the output grid; the left half is the
// mirror image.

#include <vector>

#include <json.hpp>

#include "bch/kernel.hpp"

namespace bch {

struct WaveProfile {
    WaveParams params;
    // periodic symmetric grid: x_j = -L + j dx, j = 0..2n-1, dx = L/n
    std::vector<double> x, phi, phi_prime, mu;
    double half_length = 0;        // L
    double decay_exponent_fit = 0; // fitted tail rate, ~ sqrt(gamma)
    double energy_drift = 0;       // max relative first-integral drift
    std::size_t crest_index() const { return x.size() / 2; }
};

struct ProfileOptions {
    int n_half = 2048;       // grid intervals on [0, L]; >= 64
    double tol = 1e-11;      // ODE local error tolerance
    double half_length = 0;  // 0: choose from the exponential decay bound
};

WaveProfile build_profile(const WaveParams& p, const ProfileOptions& opt = {});
inline WaveProfile build_profile(const WaveParams& p, int n, double tol) {
    return build_profile(p, ProfileOptions{n, tol, 0.0});
}

// mu from the second-order traveling relation solved for phi - phi'':
// mu = (c k - (b+1)k^2/2 - (b-1)(phi'^2 - phi^2)/2) / (c - phi).
// No numerical differentiation involved.
std::vector<double> momentum_of(const WaveProfile& profile);

// Max absolute residual of (c-phi)(phi-phi'') + (b-1)(phi'^2-phi^2)/2
// - ck + (b+1)k^2/2 with phi'' from spectral differentiation.
double ode_residual(const WaveProfile& profile);
// Same residual for arbitrary fields on the profile's grid (sensitivity probes).
double ode_residual_fields(const WaveParams& p, const std::vector<double>& phi,
                           const std::vector<double>& phi_prime, double length);

// Least-squares slope of log(phi - k) over the tail window spanning
// amplitudes [1e-7, 1e-3] x (phi(0)-k); expected ~ sqrt(gamma).
double decay_fit(const WaveProfile& profile);

// Initial-condition exchange format: header b, c, k, L, N plus the arrays.
nlohmann::json initial_condition_json(const WaveProfile& profile);

}  // namespace bch

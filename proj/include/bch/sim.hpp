#pragma once

// Periodic pseudo-spectral evolution of the momentum form
//   m_t + u m_x + b m u_x = 0,   u = k + (1 - d^2/dx^2)^{-1}(m - k),
// with classical RK4 in time, 2/3-rule dealiasing, an X_k positivity guard,
// the Casimir int m^{1/b} dx as a conservation monitor, and the H^1
// orbital-distance tracker.

#include <string>
#include <vector>

#include <json.hpp>

#include "bch/profile.hpp"
#include "bch/spectral.hpp"

namespace bch {

struct SimGrid {
    double L = 0;
    int N = 0;
};

// Validates N >= 256, power of two, L > 0.
SimGrid make_grid(double L, int N);
// Smallest power-of-two-N grid covering the wave's exponential support.
SimGrid default_grid_for(const WaveParams& p, int N = 4096);

struct SimState {
    double t = 0;
    std::vector<double> m;
    double k_bg = 0;
};

struct DtPolicy {
    double cfl = 0.25;  // dt = cfl * dx / max|u|
    double dt_max = 1e9;
};

struct RunOptions {
    DtPolicy dt;
    double blowup_factor = 10.0;          // abort when max|m| grows past this
    double resolution_threshold = 1e-10;  // abort when the spectral tail exceeds it
    int n_samples = 200;
};

class CamassaHolmFlow {
  public:
    CamassaHolmFlow(double b, const SimGrid& grid);

    const SimGrid& grid() const { return grid_; }
    Spectral& spectral() { return sp_; }
    double b() const { return b_; }

    // -(u m_x + b m u_x) with spectral derivatives and dealiased products;
    // optionally reports max|u| for the CFL policy.
    std::vector<double> rhs(const std::vector<double>& m, double k,
                            double* max_abs_u = nullptr);

    // Classical RK4 step; reports the stage-1 max|u|.
    void step(SimState& state, double dt, double* max_abs_u = nullptr);

    double max_speed(const std::vector<double>& m, double k);
    double casimir(const SimState& state);       // int m^{1/b} dx
    double mass_monitor(const SimState& state);  // int (m^{1/b} - k^{1/b}) dx

  private:
    double b_;
    SimGrid grid_;
    Spectral sp_;
};

// min over shifts x0 of || m - mu(. - x0) ||_{H^1} together with the
// minimizing shift in [0, L). Coarse search over grid shifts by spectral
// cross-correlation, then Newton refinement in x0.
std::pair<double, double> orbital_distance(Spectral& sp,
                                           const std::vector<double>& m,
                                           const std::vector<double>& mu_ref);

struct SampleRow {
    double t, d, shift, casimir, mass_monitor, max_m;
};

struct RunSummary {
    std::vector<SampleRow> rows;
    bool aborted = false;
    std::string abort_reason;
    double casimir_drift = 0;  // max relative drift over the samples
    long steps = 0;
};

// Evolves the state to time T, sampling the monitors (and the orbital
// distance when mu_ref is given). Aborts, rather than throwing, on
// positivity/blow-up/resolution violations; the summary carries the reason.
RunSummary run(CamassaHolmFlow& flow, SimState& state, double T,
               const RunOptions& opt,
               const std::vector<double>* mu_ref = nullptr);

struct StabilityReport {
    WaveParams params;
    SimGrid grid;
    double cfl = 0, dt_max = 0, resolution_threshold = 0;
    double eps = 0, T = 0;
    double stability_factor = 10.0;
    double d0 = 0, max_d = 0;
    double wave_h1 = 0;  // ||mu - k||_{H^1}, the relative-distance scale
    RunSummary series;
    std::string status;  // PASS / FAIL / ABORTED
    std::string scope_note;
};

struct StabilityOptions {
    SimGrid grid;                    // default: default_grid_for(p)
    RunOptions run;
    double stability_factor = 10.0;  // PASS: max d(t) <= factor * d(0)
    double steady_tol = 1e-6;        // eps = 0: max d(t) <= steady_tol * ||mu-k||_H1
    double bump_width = 2.0;
};

// Evolves mu (1 + eps * gaussian bump) to time T and applies the
// orbital-distance verdict. eps must keep the initial momentum positive.
StabilityReport stability_experiment(const WaveParams& p, double eps, double T,
                                     const StabilityOptions& opt = {});

// Initial condition exchange with profile-builder.
struct LoadedIC {
    WaveParams params;
    SimGrid grid;
    SimState state;
    std::vector<double> mu_ref;
};
LoadedIC load_initial_condition(const nlohmann::json& j);

nlohmann::json to_json(const StabilityReport& r);

}  // namespace bch

#include "bch/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace bch {

SimGrid make_grid(double L, int N) {
    if (!(L > 0)) throw DomainError("grid length must be positive");
    if (N < 256 || (N & (N - 1)) != 0)
        throw DomainError("grid size must be a power of two >= 256");
    return {L, N};
}

SimGrid default_grid_for(const WaveParams& p, int N) {
    const double needed = 2.0 * 30.0 / std::sqrt(p.gamma) + 8.0;
    double L = 8.0;
    while (L < needed) L *= 2.0;
    return make_grid(L, N);
}

CamassaHolmFlow::CamassaHolmFlow(double b, const SimGrid& grid)
    : b_(b), grid_(make_grid(grid.L, grid.N)), sp_(grid.N, grid.L) {
    if (!(b > 1.0)) throw DomainError("flow requires b > 1");
}

std::vector<double> CamassaHolmFlow::rhs(const std::vector<double>& m, double k,
                                         double* max_abs_u) {
    const int nm = sp_.n_modes();
    auto mhat = sp_.fft(m);
    sp_.dealias_spec(mhat);

    auto uhat = mhat;
    // Helmholtz inverse acting on the fluctuation: constants pass through, so
    // only the mean mode needs the background split.
    for (int j = 0; j < nm; ++j) uhat[j] /= 1.0 + sp_.xi(j) * sp_.xi(j);
    uhat[0] = mhat[0];  // (1-d^2)^{-1} is the identity on the mean

    auto dhat = mhat;
    auto duhat = uhat;
    for (int j = 0; j < nm; ++j) {
        const std::complex<double> ixi(0.0, sp_.xi(j));
        dhat[j] *= ixi;
        duhat[j] *= ixi;
    }
    dhat[grid_.N / 2] = 0.0;
    duhat[grid_.N / 2] = 0.0;

    const auto mfield = sp_.ifft(mhat);
    const auto u = sp_.ifft(uhat);
    const auto m_x = sp_.ifft(dhat);
    const auto u_x = sp_.ifft(duhat);

    if (max_abs_u) {
        double mx = 0;
        for (double v : u) mx = std::max(mx, std::fabs(v));
        *max_abs_u = mx;
    }

    std::vector<double> w(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        w[i] = -(u[i] * m_x[i] + b_ * mfield[i] * u_x[i]);
    auto what = sp_.fft(w);
    sp_.dealias_spec(what);
    (void)k;  // the mean-mode split above already realizes u = k + (1-d^2)^{-1}(m-k)
    return sp_.ifft(what);
}

void CamassaHolmFlow::step(SimState& state, double dt, double* max_abs_u) {
    const std::size_t n = state.m.size();
    const auto k1 = rhs(state.m, state.k_bg, max_abs_u);
    std::vector<double> tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state.m[i] + 0.5 * dt * k1[i];
    const auto k2 = rhs(tmp, state.k_bg);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state.m[i] + 0.5 * dt * k2[i];
    const auto k3 = rhs(tmp, state.k_bg);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state.m[i] + dt * k3[i];
    const auto k4 = rhs(tmp, state.k_bg);
    for (std::size_t i = 0; i < n; ++i)
        state.m[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    state.t += dt;
}

double CamassaHolmFlow::max_speed(const std::vector<double>& m, double k) {
    const auto u = sp_.helmholtz_inverse(m, k);
    double mx = 0;
    for (double v : u) mx = std::max(mx, std::fabs(v));
    return mx;
}

double CamassaHolmFlow::casimir(const SimState& state) {
    const double inv_b = 1.0 / b_;
    double total = 0;
    for (double m : state.m) total += std::pow(m, inv_b);
    return total * sp_.dx();
}

double CamassaHolmFlow::mass_monitor(const SimState& state) {
    const double inv_b = 1.0 / b_;
    const double base = std::pow(state.k_bg, inv_b);
    double total = 0;
    for (double m : state.m) total += std::pow(m, inv_b) - base;
    return total * sp_.dx();
}

std::pair<double, double> orbital_distance(Spectral& sp,
                                           const std::vector<double>& m,
                                           const std::vector<double>& mu_ref) {
    const int N = sp.n();
    const int nm = sp.n_modes();
    const auto mh = sp.fft(m);
    const auto rh = sp.fft(mu_ref);
    std::vector<std::complex<double>> corr(nm);
    for (int j = 0; j < nm; ++j)
        corr[j] = (1.0 + sp.xi(j) * sp.xi(j)) * mh[j] * std::conj(rh[j]);

    // inner(m, mu(.-x)) on grid shifts x = l dx, through one inverse transform
    const auto g_grid = sp.ifft(corr);  // (1/N) c2r
    int best = 0;
    for (int l = 1; l < N; ++l)
        if (g_grid[l] > g_grid[best]) best = l;

    const double scale = sp.length() / (static_cast<double>(N) * N);
    auto inner_at = [&](double x0, double* d1 = nullptr, double* d2 = nullptr) {
        double g = corr[0].real(), g1 = 0, g2 = 0;
        for (int j = 1; j < nm; ++j) {
            const double w = (j == N / 2) ? 1.0 : 2.0;
            const double xi = sp.xi(j);
            const std::complex<double> rot =
                corr[j] * std::polar(1.0, xi * x0);
            g += w * rot.real();
            g1 += w * -xi * rot.imag();
            g2 += w * -xi * xi * rot.real();
        }
        if (d1) *d1 = g1 * scale;
        if (d2) *d2 = g2 * scale;
        return g * scale;
    };

    double x0 = best * sp.dx();
    for (int it = 0; it < 40; ++it) {
        double g1, g2;
        inner_at(x0, &g1, &g2);
        if (!(g2 < 0)) break;
        double step = -g1 / g2;
        step = std::clamp(step, -0.5 * sp.dx(), 0.5 * sp.dx());
        x0 += step;
        if (std::fabs(step) < 1e-12 * std::max(sp.length(), 1.0)) break;
    }
    const double d2 = sp.h1_norm_sq(m) + sp.h1_norm_sq(mu_ref) - 2.0 * inner_at(x0);
    double shift = std::fmod(x0, sp.length());
    if (shift < 0) shift += sp.length();
    return {std::sqrt(std::max(d2, 0.0)), shift};
}

RunSummary run(CamassaHolmFlow& flow, SimState& state, double T,
               const RunOptions& opt, const std::vector<double>* mu_ref) {
    RunSummary summary;
    Spectral& sp = flow.spectral();
    const double dx = sp.dx();
    const double max_m0 = *std::max_element(state.m.begin(), state.m.end());
    const double c0 = flow.casimir(state);

    auto sample = [&](const SimState& s) {
        SampleRow row;
        row.t = s.t;
        if (mu_ref) {
            const auto [d, shift] = orbital_distance(sp, s.m, *mu_ref);
            row.d = d;
            row.shift = shift;
        } else {
            row.d = 0;
            row.shift = 0;
        }
        row.casimir = flow.casimir(s);
        row.mass_monitor = flow.mass_monitor(s);
        row.max_m = *std::max_element(s.m.begin(), s.m.end());
        summary.rows.push_back(row);
        summary.casimir_drift = std::max(
            summary.casimir_drift, std::fabs(row.casimir - c0) / std::fabs(c0));
    };

    auto check_state = [&](const SimState& s) -> std::string {
        for (double v : s.m)
            if (!(v > 0)) return "positivity: state left X_k (min m <= 0)";
        double mx = 0;
        for (double v : s.m) mx = std::max(mx, std::fabs(v));
        if (mx > opt.blowup_factor * std::fabs(max_m0)) {
            std::ostringstream msg;
            msg << "blow-up: max|m| = " << mx << " exceeded "
                << opt.blowup_factor << " x initial";
            return msg.str();
        }
        return {};
    };

    sample(state);
    const double t_end = state.t + T;
    double speed = flow.max_speed(state.m, state.k_bg);
    const int n_samples = std::max(opt.n_samples, 1);
    const double dt_sample = T / n_samples;
    double next_sample = state.t + dt_sample;
    long steps_since_check = 0;

    while (state.t < t_end - 1e-12 * T) {
        double dt = opt.dt.cfl * dx / std::max(speed, 1e-12);
        dt = std::min({dt, opt.dt.dt_max, next_sample - state.t, t_end - state.t});
        flow.step(state, dt, &speed);
        ++summary.steps;

        const std::string err = check_state(state);
        if (!err.empty()) {
            summary.aborted = true;
            summary.abort_reason = err;
            sample(state);
            return summary;
        }
        if (++steps_since_check >= 16) {
            steps_since_check = 0;
            const double tail = sp.tail_fraction(state.m);
            if (tail > opt.resolution_threshold) {
                std::ostringstream msg;
                msg << "resolution: spectral tail fraction " << tail
                    << " exceeded " << opt.resolution_threshold;
                summary.aborted = true;
                summary.abort_reason = msg.str();
                sample(state);
                return summary;
            }
        }
        if (state.t >= next_sample - 1e-12 * T) {
            sample(state);
            next_sample += dt_sample;
        }
    }
    return summary;
}

StabilityReport stability_experiment(const WaveParams& p, double eps, double T,
                                     const StabilityOptions& opt) {
    StabilityReport rep;
    rep.params = p;
    rep.eps = eps;
    rep.T = T;
    rep.stability_factor = opt.stability_factor;
    rep.cfl = opt.run.dt.cfl;
    rep.dt_max = opt.run.dt.dt_max;
    rep.resolution_threshold = opt.run.resolution_threshold;
    rep.scope_note =
        "finite-horizon evidence: bounds the orbital distance for one "
        "perturbation size over t in [0, T]; the stability definition "
        "quantifies over all t and all sufficiently small perturbations";

    SimGrid grid = opt.grid;
    if (grid.N == 0) grid = default_grid_for(p);
    rep.grid = grid;

    ProfileOptions popt;
    popt.n_half = grid.N / 2;
    popt.half_length = grid.L / 2.0;
    const WaveProfile prof = build_profile(p, popt);

    CamassaHolmFlow flow(p.b, grid);
    SimState state;
    state.k_bg = p.k;
    state.m = prof.mu;

    // multiplicative positivity-preserving bump at the crest
    const double xc = grid.L / 2.0;
    for (int i = 0; i < grid.N; ++i) {
        const double x = i * grid.L / grid.N;
        const double arg = (x - xc) / opt.bump_width;
        state.m[i] *= 1.0 + eps * std::exp(-arg * arg);
    }
    for (double v : state.m)
        if (!(v > 0)) throw DomainError("perturbation too large: m0 lost positivity");

    Spectral& sp = flow.spectral();
    std::vector<double> fluct(prof.mu.size());
    for (std::size_t i = 0; i < fluct.size(); ++i) fluct[i] = prof.mu[i] - p.k;
    rep.wave_h1 = std::sqrt(sp.h1_norm_sq(fluct));

    rep.d0 = orbital_distance(sp, state.m, prof.mu).first;
    rep.series = run(flow, state, T, opt.run, &prof.mu);
    rep.max_d = 0;
    for (const auto& row : rep.series.rows) rep.max_d = std::max(rep.max_d, row.d);

    if (rep.series.aborted) {
        rep.status = "ABORTED";
    } else if (eps == 0.0) {
        rep.status = (rep.max_d <= opt.steady_tol * rep.wave_h1) ? "PASS" : "FAIL";
    } else {
        rep.status = (rep.max_d <= opt.stability_factor * rep.d0) ? "PASS" : "FAIL";
    }
    return rep;
}

LoadedIC load_initial_condition(const nlohmann::json& j) {
    LoadedIC ic;
    ic.params = make_params(j.at("b").get<double>(), j.at("c").get<double>(),
                            j.at("k").get<double>());
    const double L = j.at("L").get<double>();
    const int N = j.at("N").get<int>();
    ic.grid = make_grid(L, N);
    ic.mu_ref = j.at("mu").get<std::vector<double>>();
    if (static_cast<int>(ic.mu_ref.size()) != N)
        throw DomainError("initial condition: mu array size differs from N");
    ic.state.t = 0;
    ic.state.k_bg = ic.params.k;
    ic.state.m = ic.mu_ref;
    return ic;
}

nlohmann::json to_json(const StabilityReport& r) {
    nlohmann::json j;
    j["b"] = r.params.b;
    j["c"] = r.params.c;
    j["k"] = r.params.k;
    j["gamma"] = r.params.gamma;
    j["h"] = r.params.h;
    j["grid"] = {{"L", r.grid.L}, {"N", r.grid.N}};
    j["dt_policy"] = {{"cfl", r.cfl}, {"dt_max", r.dt_max}};
    j["resolution_threshold"] = r.resolution_threshold;
    j["eps"] = r.eps;
    j["T"] = r.T;
    j["stability_factor"] = r.stability_factor;
    j["d0"] = r.d0;
    j["max_d"] = r.max_d;
    j["wave_h1"] = r.wave_h1;
    j["casimir_drift"] = r.series.casimir_drift;
    j["steps"] = r.series.steps;
    j["status"] = r.status;
    if (!r.series.abort_reason.empty()) j["abort_reason"] = r.series.abort_reason;
    j["scope_note"] = r.scope_note;
    return j;
}

}  // namespace bch

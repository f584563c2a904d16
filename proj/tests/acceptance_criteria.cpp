// Acceptance suite: one criterion per run line, each with its tolerance and
// runtime budget pinned in code. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bch/mpoly.hpp"
#include "bch/orbit.hpp"
#include "bch/profile.hpp"
#include "bch/proof.hpp"
#include "bch/sim.hpp"

using namespace bch;

namespace {

int g_failures = 0;

void run_criterion(int index, const std::string& name, double time_budget_s,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (time_budget_s > 0 && elapsed > time_budget_s) {
        ok = false;
        std::ostringstream extra;
        extra << detail << (detail.empty() ? "" : "; ") << "runtime " << elapsed
              << " s exceeded budget " << time_budget_s << " s";
        detail = extra.str();
    }
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL",
                index, name.c_str(), elapsed, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
}

double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

const std::vector<double> kBGrid = {1.5, 2.0, 2.5, 3.0, 4.0, 10.0};
const std::vector<double> kHGrid = {1.05, 1.2, 1.4, 1.7, 2.0,
                                    2.5,  3.0, 4.0, 6.0, 10.0};

WaveParams params_for_h(double b, double h) {
    const double gamma = 1.0 / h;
    const double k = (1.0 - gamma) / ((b + 1.0) - gamma);  // c = 1
    return make_params(b, 1.0, k);
}

}  // namespace

int main() {
    std::printf("acceptance suite: stability criteria for smooth solitary waves\n");

    run_criterion(1, "exact R-pair eliminant b(b+1)(b-1) z^2", 1.0,
                  [](std::string& detail) {
                      const MPoly res = resultant_nu(poly_R(), poly_Rp());
                      const MPoly b = MPoly::variable(MPoly::B);
                      const MPoly z = MPoly::variable(MPoly::Z);
                      const MPoly one = MPoly::constant(1);
                      const MPoly expected = b * (b + one) * (b - one) * z * z;
                      if (res != expected) {
                          detail = "resultant = " + res.str();
                          return false;
                      }
                      return true;
                  });

    run_criterion(2, "P-pair eliminant divisible by z^4 and l(z), cofactor archived",
                  1.0, [](std::string& detail) {
                      const FactorReport rep = eliminant_P_report();
                      std::ostringstream out;
                      out << "z^" << rep.z_power << " * l(z) * [" << rep.cofactor.str()
                          << "]";
                      detail = out.str();
                      return rep.z_power >= 4 && rep.l_divides &&
                             !rep.cofactor.is_zero();
                  });

    run_criterion(3, "special cases: (H2)|b=3 = 2z^3(z-2), (H1)|b=2 = 2z^4", 1.0,
                  [](std::string& detail) {
                      const MPoly z = MPoly::variable(MPoly::Z);
                      const MPoly r3 = poly_R()
                                           .substitute(MPoly::B, Rat(3))
                                           .substitute(MPoly::NU, nu_poly_int(3));
                      const MPoly p2 = poly_P()
                                           .substitute(MPoly::B, Rat(2))
                                           .substitute(MPoly::NU, nu_poly_int(2));
                      const MPoly want_r =
                          MPoly::constant(2) * z.pow(4) - MPoly::constant(4) * z.pow(3);
                      const MPoly want_p = MPoly::constant(2) * z.pow(4);
                      const IdentityReport idrep = verify_identity_expansions();
                      if (!(r3 == want_r)) detail = "H2 at b=3: " + r3.str();
                      if (!(p2 == want_p)) detail += " H1 at b=2: " + p2.str();
                      return r3 == want_r && p2 == want_p && idrep.pass;
                  });

    run_criterion(
        4, "boundary and Taylor values of R and P", 5.0, [](std::string& detail) {
            bool ok = true;
            std::ostringstream why;
            // exact for integer b
            for (long b : {2L, 3L, 4L, 5L}) {
                const Rat rb(b);
                const MPoly r = poly_R().substitute(MPoly::B, rb).substitute(
                    MPoly::NU, nu_poly_int(b));
                const MPoly p = poly_P().substitute(MPoly::B, rb).substitute(
                    MPoly::NU, nu_poly_int(b));
                if (r.eval(Rat(1), Rat(0), Rat(0)) != Rat(1 - b)) ok = false;
                if (p.eval(Rat(1), Rat(0), Rat(0)) != Rat(2 * (b - 1) * (b - 1)))
                    ok = false;
                if (r.coefficient({3, 0, 0}) != Rat(b) * Rat(1 - b) * Rat(1 + b) / 6)
                    ok = false;
                if (p.coefficient({4, 0, 0}) !=
                    Rat(b * b) * Rat(b + 1) * Rat((b - 1) * (b - 1)) / 6)
                    ok = false;
            }
            if (!ok) why << "integer-b exact checks failed; ";
            // series fit for non-integer b
            for (double b : {1.5, 2.5, 3.5}) {
                const Kernel kern(b);
                // Richardson in z removes the O(z) remainder of the scaled limits
                auto extrap = [&](auto select) {
                    const double f1 = select(kern.reduced(1e-7));
                    const double f2 = select(kern.reduced(5e-8));
                    return 2.0 * f2 - f1;
                };
                const double r3_limit =
                    extrap([](const KernelReduced& r) { return r.r3; });
                const double p4_limit =
                    extrap([](const KernelReduced& r) { return r.p4; });
                const double want_r3 = b / 6.0 * (b - 1.0) * (b + 1.0);  // = -R coeff
                const double want_p4 =
                    b * b * (b + 1.0) * (b - 1.0) * (b - 1.0) / 6.0;
                if (rel_diff(r3_limit, want_r3) > 1e-6 ||
                    rel_diff(p4_limit, want_p4) > 1e-6) {
                    ok = false;
                    why << "taylor fit off at b=" << b << "; ";
                }
                if (rel_diff(eval_R(1.0, b), 1.0 - b) > 1e-6 ||
                    rel_diff(eval_P(1.0, b), 2.0 * (b - 1.0) * (b - 1.0)) > 1e-6) {
                    ok = false;
                    why << "boundary value off at b=" << b << "; ";
                }
            }
            detail = why.str();
            return ok;
        });

    run_criterion(
        5, "hypothesis grid 200x500 on [1.1,10]x(0,1): R<0 and P>0", 30.0,
        [](std::string& detail) {
            std::vector<double> bs(200), zs(500);
            for (int i = 0; i < 200; ++i) bs[i] = 1.1 + i * (10.0 - 1.1) / 199.0;
            for (int j = 0; j < 500; ++j) zs[j] = (j + 1) / 501.0;
            const GridReport rep = hypothesis_grid_check(bs, zs);
            std::ostringstream out;
            out << rep.nodes << " nodes, " << rep.violations.size() << " violations";
            detail = out.str();
            return rep.pass && rep.nodes == 100000;
        });

    run_criterion(
        6, "Q route equivalence <= 1e-6 relative on the 6x10 (b,h) grid", 60.0,
        [](std::string& detail) {
            double worst = 0;
            for (double b : kBGrid)
                for (double h : kHGrid) {
                    const WaveParams p = params_for_h(b, h);
                    const double qx = q_via_x(p, 1e-10).value;
                    const double qu = q_via_ubar(b, h, 1e-10).value;
                    worst = std::max(worst, rel_diff(qx, qu));
                }
            std::ostringstream out;
            out << "max relative gap " << worst;
            detail = out.str();
            return worst <= 1e-6;
        });

    run_criterion(
        7, "calculus chain: I2' identity <= 1e-6, FD(Q) vs I1' <= 1e-4", 240.0,
        [](std::string& detail) {
            double worst_i2 = 0, worst_fd = 0;
            for (double b : kBGrid)
                for (double h : kHGrid) {
                    const WaveParams p = params_for_h(b, h);
                    const double q = q_via_x(p, 1e-10).value;
                    const double i2 = i2_prime(b, h, 1e-10).value;
                    worst_i2 = std::max(
                        worst_i2, std::fabs(0.5 * q / std::sqrt(h) + i2) / i2);
                    const double i1 = i1_prime(b, h, 1e-10).value;
                    const double fd = q_derivative_fd(b, h, 1e-10);
                    worst_fd =
                        std::max(worst_fd, rel_diff(std::sqrt(h) * fd, i1));
                }
            std::ostringstream out;
            out << "max I2' identity gap " << worst_i2 << ", max FD gap " << worst_fd;
            detail = out.str();
            return worst_i2 <= 1e-6 && worst_fd <= 1e-4;
        });

    run_criterion(
        8, "I1' > 0 and Q strictly increasing in k for b in {1.01..10}", 120.0,
        [](std::string& detail) {
            double min_i1 = 1e300, min_dq = 1e300;
            bool pass = true;
            for (double b : {1.01, 1.5, 2.0, 3.0, 4.0, 10.0}) {
                std::vector<double> ks;
                const double sup = 1.0 / (b + 1.0);
                for (int i = 1; i <= 12; ++i) ks.push_back(sup * i / 13.0);
                const MonotonicityReport rep = monotonicity_scan(b, 1.0, ks, 1e-10);
                pass = pass && rep.pass;
                min_i1 = std::min(min_i1, rep.min_i1p);
                min_dq = std::min(min_dq, rep.min_dq);
            }
            std::ostringstream out;
            out << "min I1' margin " << min_i1 << ", min forward dQ " << min_dq;
            detail = out.str();
            return pass && min_i1 > 0 && min_dq > 0;
        });

    run_criterion(
        9, "profile validity on 10 parameter points", 60.0, [](std::string& detail) {
            const std::vector<std::pair<double, double>> points = {
                {1.2, 0.5}, {1.5, 0.5}, {2.0, 0.5}, {2.0, 0.88}, {2.5, 0.5},
                {3.0, 0.5}, {4.0, 0.5}, {5.0, 0.5}, {7.0, 0.5},  {10.0, 0.5}};
            double worst_resid = 0, worst_decay = 0;
            for (const auto& [b, kfrac] : points) {
                const WaveParams p = make_params(b, 1.0, kfrac / (b + 1.0));
                const WaveProfile prof = build_profile(p, ProfileOptions{2048, 1e-11, 0});
                const double scale =
                    std::fabs(p.c * p.k - 0.5 * (p.b + 1.0) * p.k * p.k);
                worst_resid = std::max(worst_resid, ode_residual(prof) / scale);
                worst_decay = std::max(
                    worst_decay,
                    rel_diff(prof.decay_exponent_fit, std::sqrt(p.gamma)));
                const std::size_t crest = prof.crest_index();
                const double amp = prof.phi[crest] - p.k;
                for (std::size_t j = 0; j < prof.phi.size(); ++j) {
                    if (!(prof.phi[j] > p.k && prof.phi[j] < p.c)) return false;
                    if (!(prof.mu[j] > 0)) return false;
                }
                if (!(prof.phi.front() - p.k <= 1e-12 * amp)) return false;
                if (!(std::fabs(prof.mu.front() - p.k) <= 1e-9)) return false;
            }
            std::ostringstream out;
            out << "max residual/scale " << worst_resid << ", max decay misfit "
                << worst_decay;
            detail = out.str();
            return worst_resid <= 1e-6 && worst_decay <= 0.02;
        });

    run_criterion(
        10, "solitary wave propagation at N = 4096 over T = 50/c", 300.0,
        [](std::string& detail) {
            const WaveParams p = make_params(2.0, 1.0, 0.25);
            const SimGrid grid = default_grid_for(p, 4096);
            ProfileOptions popt;
            popt.n_half = grid.N / 2;
            popt.half_length = grid.L / 2.0;
            const WaveProfile prof = build_profile(p, popt);
            CamassaHolmFlow flow(p.b, grid);
            SimState state;
            state.k_bg = p.k;
            state.m = prof.mu;
            RunOptions opt;
            opt.n_samples = 100;
            const double T = 50.0 / p.c;
            const RunSummary sum = run(flow, state, T, opt, &prof.mu);
            if (sum.aborted) {
                detail = "aborted: " + sum.abort_reason;
                return false;
            }
            Spectral sp(grid.N, grid.L);
            std::vector<double> fluct(prof.mu.size());
            for (std::size_t i = 0; i < fluct.size(); ++i)
                fluct[i] = prof.mu[i] - p.k;
            const double wave_h1 = std::sqrt(sp.h1_norm_sq(fluct));
            double max_d = 0;
            for (const auto& row : sum.rows) max_d = std::max(max_d, row.d);
            std::ostringstream out;
            out << "max relative H1 distance " << max_d / wave_h1
                << ", casimir drift " << sum.casimir_drift;
            detail = out.str();
            return max_d <= 1e-3 * wave_h1 && sum.casimir_drift <= 1e-8;
        });

    run_criterion(
        11, "orbital-stability evidence at 1% perturbation for b in {2,3,4}", 300.0,
        [](std::string& detail) {
            std::ostringstream out;
            bool pass = true;
            for (const auto& [b, k] :
                 std::vector<std::pair<double, double>>{{2.0, 0.25}, {3.0, 0.2}, {4.0, 0.15}}) {
                const WaveParams p = make_params(b, 1.0, k);
                StabilityOptions opt;
                opt.run.n_samples = 100;
                const StabilityReport rep =
                    stability_experiment(p, 0.01, 50.0 / p.c, opt);
                out << "b=" << b << ": " << rep.status << " max_d/d0 "
                    << rep.max_d / rep.d0 << "; ";
                pass = pass && rep.status == "PASS";
                if (rep.scope_note.find("finite-horizon") == std::string::npos)
                    pass = false;
            }
            out << "reports labeled finite-horizon evidence";
            detail = out.str();
            return pass;
        });

    if (g_failures == 0)
        std::printf("all 11 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures;
}

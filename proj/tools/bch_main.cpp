// bch: batch verification tool for the stability analysis of smooth solitary
// waves of the b-family Camassa-Holm equation.
//
// Subcommands: hypotheses, qscan, profile, simulate, phase. Exit status is
// 0 when every check passed, 1 on a verification failure, 2 on a usage or
// configuration error. Outputs are deterministic for a fixed config and seed
// (JSON files carry a timestamp field; CSV files carry none).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bch/orbit.hpp"
#include "bch/profile.hpp"
#include "bch/proof.hpp"
#include "bch/sim.hpp"
#include "bch/version.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
    double b = 2.0, c = 1.0, k = 0.25;
    double tol = 1e-10;
    int grid_n = 0;  // per-command default when 0
    std::string out_dir = "out";
    long seed = 12345;
    std::string config_path;
};

json config_json(const CommonOpts& o, const std::string& command) {
    json j;
    j["command"] = command;
    j["b"] = o.b;
    j["c"] = o.c;
    j["k"] = o.k;
    j["tol"] = o.tol;
    if (o.grid_n > 0) j["grid_n"] = o.grid_n;
    j["seed"] = o.seed;
    return j;
}

json meta_json(const CommonOpts& o, const std::string& command) {
    json j;
    j["version"] = bch::kVersion;
    j["config"] = config_json(o, command);
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now).count();
    return j;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name);
    if (!out) throw bch::DomainError("cannot open output file " + dir + "/" + name);
    return out;
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
    auto out = open_output(dir, name);
    out << j.dump(2) << "\n";
}

std::string csv_header_comment(const CommonOpts& o, const std::string& command) {
    std::ostringstream s;
    s << "# bch " << bch::kVersion << " " << command
      << " config=" << config_json(o, command).dump() << "\n";
    return s.str();
}

// "lo:hi:n" -> n equally spaced values on [lo, hi]
std::vector<double> parse_grid(const std::string& text) {
    double lo, hi;
    int n;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2)
        throw bch::DomainError("grid spec must be lo:hi:n with n >= 2, got " + text);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / (n - 1.0);
    return grid;
}

bch::Rat parse_rational(const std::string& text) {
    try {
        bch::Rat r(text, 10);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw bch::DomainError("not a rational number: " + text);
    }
}

std::vector<bch::Rat> parse_rational_list(const std::string& text) {
    std::vector<bch::Rat> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) throw bch::DomainError("empty b-set");
    return out;
}

// ---------------------------------------------------------------------------

int cmd_hypotheses(const CommonOpts& o, const std::string& b_set_text,
                   bool inject_defect) {
    const auto b_set = parse_rational_list(b_set_text);
    bool all_pass = true;
    json bundle = meta_json(o, "hypotheses");

    const bch::IdentityReport identities =
        bch::verify_identity_expansions({2, 3, 4, 5}, inject_defect);
    bundle["identity_expansions"] = bch::to_json(identities);
    all_pass = all_pass && identities.pass;
    if (!identities.pass)
        for (const auto& row : identities.rows) {
            if (!row.h2_diff.empty())
                std::cerr << "identity failure at b = " << row.b
                          << ", difference: " << row.h2_diff << "\n";
            if (!row.h1_diff.empty())
                std::cerr << "identity failure at b = " << row.b
                          << ", difference: " << row.h1_diff << "\n";
        }

    // exact eliminant of the R pair
    {
        const bch::MPoly res = bch::resultant_nu(bch::poly_R(), bch::poly_Rp());
        const bch::MPoly B = bch::MPoly::variable(bch::MPoly::B);
        const bch::MPoly Z = bch::MPoly::variable(bch::MPoly::Z);
        const bch::MPoly one = bch::MPoly::constant(1);
        const bool exact = (res == B * (B + one) * (B - one) * Z * Z);
        bundle["r_eliminant"] = {{"value", res.str()},
                                 {"matches_b(b+1)(b-1)z^2", exact}};
        all_pass = all_pass && exact;
    }
    bundle["p_eliminant"] = bch::to_json(bch::eliminant_P_report());

    json certs = json::array();
    for (const auto& b : b_set) {
        const auto r = bch::certify_no_common_roots(bch::EliminantPair::R_pair, b);
        const auto p = bch::certify_no_common_roots(bch::EliminantPair::P_pair, b);
        certs.push_back(bch::to_json(r));
        certs.push_back(bch::to_json(p));
        all_pass = all_pass && r.pass && p.pass;
    }
    bundle["certificates"] = certs;

    const int nz = o.grid_n > 0 ? o.grid_n : 500;
    std::vector<double> bs(200), zs(nz);
    for (int i = 0; i < 200; ++i) bs[i] = 1.1 + i * (10.0 - 1.1) / 199.0;
    for (int j = 0; j < nz; ++j) zs[j] = (j + 1) / (nz + 1.0);
    const bch::GridReport grid = bch::hypothesis_grid_check(bs, zs);
    bundle["sign_grid"] = {{"nodes", grid.nodes},
                           {"violations", grid.violations.size()},
                           {"verdict", grid.pass ? "PASS" : "FAIL"}};
    all_pass = all_pass && grid.pass;

    bundle["verdict"] = all_pass ? "PASS" : "FAIL";
    write_json(o.out_dir, "hypotheses_certificates.json", bundle);
    std::cout << "hypotheses: " << (all_pass ? "PASS" : "FAIL") << " ("
              << certs.size() << " certificates, " << grid.nodes
              << " grid nodes)\n";
    return all_pass ? 0 : 1;
}

int cmd_qscan(const CommonOpts& o, const std::string& k_grid_text) {
    std::vector<double> ks;
    if (!k_grid_text.empty()) {
        ks = parse_grid(k_grid_text);
    } else {
        const double sup = o.c / (o.b + 1.0);
        const int n = o.grid_n > 0 ? o.grid_n : 20;
        for (int i = 0; i < n; ++i)
            ks.push_back(sup * (0.05 + 0.90 * i / (n - 1.0)));
    }
    const bch::MonotonicityReport rep =
        bch::monotonicity_scan(o.b, o.c, ks, o.tol);

    auto csv = open_output(o.out_dir, "qscan.csv");
    csv << csv_header_comment(o, "qscan");
    csv << "b,c,k,gamma,h,Q,dQdh_fd,I1p,I2p,margin\n";
    char line[512];
    for (const auto& r : rep.rows) {
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      o.b, o.c, r.k, r.gamma, r.h, r.Q, r.dQdh_fd, r.i1p, r.i2p,
                      r.margin);
        csv << line;
    }
    json j = meta_json(o, "qscan");
    j["rows"] = rep.rows.size();
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"k", r.k},
                        {"gamma", r.gamma},
                        {"h", r.h},
                        {"Q", r.Q},
                        {"dQdh_fd", r.dQdh_fd},
                        {"I1p", r.i1p},
                        {"I2p", r.i2p},
                        {"margin", r.margin}});
    j["grid"] = rows;
    j["min_i1p"] = rep.min_i1p;
    j["min_forward_dQ"] = rep.min_dq;
    j["verdict"] = rep.pass ? "PASS" : "FAIL";
    write_json(o.out_dir, "qscan.json", j);
    std::cout << "qscan: " << (rep.pass ? "PASS" : "FAIL") << " (min I1' margin "
              << rep.min_i1p << ")\n";
    return rep.pass ? 0 : 1;
}

int cmd_profile(const CommonOpts& o) {
    const bch::WaveParams p = bch::make_params(o.b, o.c, o.k);
    bch::ProfileOptions popt;
    popt.n_half = o.grid_n > 0 ? o.grid_n : 2048;
    popt.tol = std::min(o.tol, 1e-10);
    const bch::WaveProfile prof = bch::build_profile(p, popt);

    auto csv = open_output(o.out_dir, "profile.csv");
    csv << csv_header_comment(o, "profile");
    csv << "x,phi,phi_prime,mu\n";
    char line[256];
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", prof.x[i],
                      prof.phi[i], prof.phi_prime[i], prof.mu[i]);
        csv << line;
    }
    write_json(o.out_dir, "profile_ic.json", bch::initial_condition_json(prof));

    const double scale = std::fabs(p.c * p.k - 0.5 * (p.b + 1.0) * p.k * p.k);
    const double resid = bch::ode_residual(prof);
    const bool pass = resid <= 1e-6 * scale &&
                      std::fabs(prof.decay_exponent_fit - std::sqrt(p.gamma)) <=
                          0.02 * std::sqrt(p.gamma);
    json j = meta_json(o, "profile");
    j["gamma"] = p.gamma;
    j["h"] = p.h;
    j["half_length"] = prof.half_length;
    j["crest_phi"] = prof.phi[prof.crest_index()];
    j["ode_residual"] = resid;
    j["ode_residual_scale"] = scale;
    j["decay_exponent_fit"] = prof.decay_exponent_fit;
    j["decay_exponent_expected"] = std::sqrt(p.gamma);
    j["energy_drift"] = prof.energy_drift;
    j["verdict"] = pass ? "PASS" : "FAIL";
    write_json(o.out_dir, "profile.json", j);
    std::cout << "profile: " << (pass ? "PASS" : "FAIL") << " (residual " << resid
              << ", decay " << prof.decay_exponent_fit << ")\n";
    return pass ? 0 : 1;
}

int cmd_simulate(const CommonOpts& o, int N, double domain_L, double T,
                 double eps, const std::string& ic_path) {
    bch::StabilityReport rep;
    if (!ic_path.empty()) {
        std::ifstream in(ic_path);
        if (!in) throw bch::DomainError("cannot read initial condition " + ic_path);
        json ic_json;
        in >> ic_json;
        const bch::LoadedIC ic = bch::load_initial_condition(ic_json);
        bch::StabilityOptions opt;
        opt.grid = ic.grid;
        rep = bch::stability_experiment(ic.params, eps, T, opt);
    } else {
        const bch::WaveParams p = bch::make_params(o.b, o.c, o.k);
        bch::StabilityOptions opt;
        opt.grid = domain_L > 0 ? bch::make_grid(domain_L, N)
                                : bch::default_grid_for(p, N);
        rep = bch::stability_experiment(p, eps, T, opt);
    }

    auto csv = open_output(o.out_dir, "simulate_series.csv");
    csv << csv_header_comment(o, "simulate");
    csv << "t,d,shift,casimir,mass_monitor,max_m\n";
    char line[384];
    for (const auto& r : rep.series.rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.t, r.d, r.shift, r.casimir, r.mass_monitor, r.max_m);
        csv << line;
    }
    json j = meta_json(o, "simulate");
    j["report"] = bch::to_json(rep);
    write_json(o.out_dir, "simulate.json", j);
    std::cout << "simulate: " << rep.status << " (d0 " << rep.d0 << ", max d "
              << rep.max_d << ", casimir drift " << rep.series.casimir_drift
              << ")\n";
    if (rep.status == "ABORTED")
        std::cout << "  aborted: " << rep.series.abort_reason << "\n";
    return rep.status == "PASS" ? 0 : 1;
}

int cmd_phase(const CommonOpts& o, double gamma_flag) {
    bch::WaveParams p;
    if (gamma_flag > 0) {
        if (!(gamma_flag < 1)) throw bch::DomainError("gamma must lie in (0,1)");
        const double k = (1.0 - gamma_flag) / ((o.b + 1.0) - gamma_flag);
        p = bch::make_params(o.b, 1.0, k);
    } else {
        p = bch::make_params(o.b, o.c, o.k);
    }
    const int n = o.grid_n > 0 ? o.grid_n : 400;
    const auto xy = bch::level_curve_samples_xy(p, n);
    const auto zu = bch::level_curve_samples_zu(p.b, p.h, n);

    const double level = bch::homoclinic_level(p);
    double worst = 0;
    auto csv = open_output(o.out_dir, "phase_xy.csv");
    csv << csv_header_comment(o, "phase");
    csv << "x,y\n";
    char line[160];
    for (const auto& pt : xy) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", pt.x, pt.y);
        csv << line;
        const double H = bch::first_integral_normalized(pt.x, pt.y, p);
        worst = std::max(worst, std::fabs(H - level) / std::fabs(level));
    }
    auto csv2 = open_output(o.out_dir, "phase_zu.csv");
    csv2 << csv_header_comment(o, "phase");
    csv2 << "z,ubar\n";
    for (const auto& pt : zu) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", pt.x, pt.y);
        csv2 << line;
        const double H = bch::first_integral_transformed(pt.x, pt.y, p.b);
        worst = std::max(worst, std::fabs(H - p.h) / p.h);
    }
    const bool pass = worst <= 1e-10;
    json j = meta_json(o, "phase");
    j["gamma"] = p.gamma;
    j["h"] = p.h;
    j["samples"] = n;
    j["max_level_residual"] = worst;
    j["verdict"] = pass ? "PASS" : "FAIL";
    write_json(o.out_dir, "phase.json", j);
    std::cout << "phase: " << (pass ? "PASS" : "FAIL") << " (level residual "
              << worst << ")\n";
    return pass ? 0 : 1;
}

// Pre-scan for --config and fold its values in as defaults; explicit flags win.
json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw bch::DomainError(std::string("cannot read config file ") +
                                            argv[i + 1]);
            try {
                json j;
                in >> j;
                return j;
            } catch (const json::exception& e) {
                throw bch::DomainError(std::string("config file is not valid JSON: ") +
                                       e.what());
            }
        }
    }
    return json::object();
}

template <class T>
void from_config(const json& cfg, const char* key, T& slot) {
    if (cfg.contains(key)) slot = cfg.at(key).get<T>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification pipelines for smooth solitary waves of the "
                 "b-family Camassa-Holm equation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", bch::kVersion);

    CommonOpts opts;
    std::string b_set = "3/2,2,5/2,3,4,10";
    std::string k_grid_text;
    bool inject_defect = false;
    int N = 4096;
    double domain_L = 0;
    double T = 50.0;
    double eps = 0.01;
    double gamma_flag = 0;
    std::string ic_path;

    try {
        try {
            const json cfg = load_config(argc, argv);
            from_config(cfg, "b", opts.b);
            from_config(cfg, "c", opts.c);
            from_config(cfg, "k", opts.k);
            from_config(cfg, "tol", opts.tol);
            from_config(cfg, "grid_n", opts.grid_n);
            from_config(cfg, "out", opts.out_dir);
            from_config(cfg, "seed", opts.seed);
            from_config(cfg, "b_set", b_set);
            from_config(cfg, "k_grid", k_grid_text);
            from_config(cfg, "N", N);
            from_config(cfg, "domain_L", domain_L);
            from_config(cfg, "T", T);
            from_config(cfg, "eps", eps);
            from_config(cfg, "gamma", gamma_flag);
        } catch (const json::exception& e) {
            throw bch::DomainError(std::string("bad config value: ") + e.what());
        }

        app.add_option("--b", opts.b, "parameter b > 1");
        app.add_option("--c", opts.c, "wave speed c > 0");
        app.add_option("--k", opts.k, "asymptotic level k in (0, c/(b+1))");
        app.add_option("--tol", opts.tol, "quadrature tolerance");
        app.add_option("--grid-n", opts.grid_n, "grid size (command-specific)");
        app.add_option("--out", opts.out_dir, "output directory");
        app.add_option("--seed", opts.seed, "random seed recorded in outputs");
        app.add_option("--config", opts.config_path, "JSON config file");

        auto* hyp = app.add_subcommand(
            "hypotheses", "exact identities, eliminants, certificates, sign grids");
        hyp->fallthrough();
        hyp->add_option("--b-set", b_set, "comma list of rational b values");
        hyp->add_flag("--inject-r-defect", inject_defect,
                      "negative-control hook: corrupt one R coefficient");

        auto* qs = app.add_subcommand(
            "qscan", "Q monotonicity and I1' positivity over a k grid");
        qs->fallthrough();
        qs->add_option("--k-grid", k_grid_text, "k grid as lo:hi:n");

        app.add_subcommand("profile", "reconstruct a solitary-wave profile")
            ->fallthrough();

        auto* sim = app.add_subcommand(
            "simulate", "evolve a perturbed wave and track the orbital distance");
        sim->fallthrough();
        sim->add_option("--N", N, "grid points (power of two, >= 256)");
        sim->add_option("--domain-L", domain_L, "periodic domain length");
        sim->add_option("--T", T, "final time");
        sim->add_option("--eps", eps, "relative perturbation amplitude");
        sim->add_option("--ic", ic_path, "initial-condition JSON from profile");

        auto* ph = app.add_subcommand("phase", "sample the level curves");
        ph->fallthrough();
        ph->add_option("--gamma", gamma_flag, "gamma in (0,1); overrides c,k");

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForVersion& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;  // usage error
        }

        if (app.got_subcommand("hypotheses"))
            return cmd_hypotheses(opts, b_set, inject_defect);
        if (app.got_subcommand("qscan")) return cmd_qscan(opts, k_grid_text);
        if (app.got_subcommand("profile")) return cmd_profile(opts);
        if (app.got_subcommand("simulate"))
            return cmd_simulate(opts, N, domain_L, T, eps, ic_path);
        if (app.got_subcommand("phase")) return cmd_phase(opts, gamma_flag);
        return 2;
    } catch (const bch::DomainError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 1;
    }
}

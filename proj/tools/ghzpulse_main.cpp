// Command-line front end: design verification, single simulations, figure
// scans, and chain parameter tables. Exit codes: 0 ok, 2 config error,
// 3 convergence failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ghz/io.hpp"
#include "ghz/ion_chain.hpp"
#include "ghz/optimize.hpp"
#include "ghz/perturbative.hpp"
#include "ghz/tdse.hpp"
#include "ghz/trajectory.hpp"

using json = nlohmann::json;
using namespace ghz;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_convergence = 3;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// strict config schema
// ---------------------------------------------------------------------------

void reject_unknown(const json& obj, const std::string& where,
                    const std::vector<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError("expected an object at: " + (where.empty() ? "config root" : where));
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key: " + where + key);
    }
}

double need_num(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("missing key: " + where + key);
    if (!obj[key].is_number()) throw ConfigError("not a number: " + where + key);
    return obj[key].get<double>();
}

int need_int(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("missing key: " + where + key);
    if (!obj[key].is_number_integer()) throw ConfigError("not an integer: " + where + key);
    return obj[key].get<int>();
}

double opt_num(const json& obj, const std::string& where, const std::string& key,
               double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError("not a number: " + where + key);
    return obj[key].get<double>();
}

int opt_int(const json& obj, const std::string& where, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) throw ConfigError("not an integer: " + where + key);
    return obj[key].get<int>();
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("config parse error: ") + ex.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    return j;
}

Pulse pulse_from_config(const json& jp, double eta) {
    reject_unknown(jp, "pulse.", {"family", "k", "a", "A", "da", "dA", "t_gate", "amp_rel"});
    if (!jp.contains("family") || !jp["family"].is_string())
        throw ConfigError("missing key: pulse.family");
    PulseFamily family;
    try {
        family = family_from_name(jp["family"].get<std::string>());
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    }
    const double t_gate = opt_num(jp, "pulse.", "t_gate", 1.0);
    const double amp_rel = opt_num(jp, "pulse.", "amp_rel", 0.0);
    Pulse p;
    switch (family) {
        case PulseFamily::rectangular:
        case PulseFamily::echoed_rectangular: {
            const int k = opt_int(jp, "pulse.", "k", 1);
            if (k < 1) throw ConfigError("pulse.k must be >= 1");
            p = make_rectangular(k, t_gate, eta);
            if (family == PulseFamily::echoed_rectangular) p = echo_transform(p);
            break;
        }
        case PulseFamily::lemniscate:
        case PulseFamily::echoed_lemniscate: {
            const DesignPoint dp = lemniscate_design_point();
            const double a = opt_num(jp, "pulse.", "a", dp.a0) + opt_num(jp, "pulse.", "da", 0.0);
            const double A = opt_num(jp, "pulse.", "A", dp.A0) + opt_num(jp, "pulse.", "dA", 0.0);
            try {
                p = make_lemniscate(a, A, t_gate, eta);
            } catch (const std::exception& ex) {
                throw ConfigError(std::string("pulse: ") + ex.what());
            }
            if (family == PulseFamily::echoed_lemniscate) p = echo_transform(p);
            break;
        }
        default: throw ConfigError("pulse.family custom is not constructible from a config");
    }
    if (amp_rel != 0.0) p = p.scaled(1.0 + amp_rel);
    return p;
}

SolverOptions solver_from_config(const json& j, int workers_flag) {
    SolverOptions s;
    if (!j.contains("solver")) {
        if (workers_flag > 0) s.workers = workers_flag;
        return s;
    }
    const json& js = j["solver"];
    reject_unknown(js, "solver.",
                   {"cutoff", "time_steps", "step_tol", "cutoff_tol", "leakage_tol",
                    "max_doublings", "workers", "use_block_symmetry", "verify_cutoff"});
    s.time_steps = opt_int(js, "solver.", "time_steps", s.time_steps);
    if (s.time_steps < 256) throw ConfigError("solver.time_steps must be >= 256");
    s.step_tol = opt_num(js, "solver.", "step_tol", s.step_tol);
    s.cutoff_tol = opt_num(js, "solver.", "cutoff_tol", s.cutoff_tol);
    s.leakage_tol = opt_num(js, "solver.", "leakage_tol", s.leakage_tol);
    s.max_step_doublings = opt_int(js, "solver.", "max_doublings", s.max_step_doublings);
    s.workers = opt_int(js, "solver.", "workers", 0);
    if (js.contains("use_block_symmetry")) {
        if (!js["use_block_symmetry"].is_boolean())
            throw ConfigError("not a boolean: solver.use_block_symmetry");
        s.use_block_symmetry = js["use_block_symmetry"].get<bool>();
    }
    if (js.contains("verify_cutoff")) {
        if (!js["verify_cutoff"].is_boolean())
            throw ConfigError("not a boolean: solver.verify_cutoff");
        s.verify_cutoff = js["verify_cutoff"].get<bool>();
    }
    if (workers_flag > 0) s.workers = workers_flag;
    return s;
}

int config_cutoff(const json& j) {
    if (!j.contains("solver") || !j["solver"].contains("cutoff")) return 0;
    const json& c = j["solver"]["cutoff"];
    if (c.is_string()) {
        if (c.get<std::string>() != "auto") throw ConfigError("solver.cutoff must be int or \"auto\"");
        return 0;
    }
    if (!c.is_number_integer()) throw ConfigError("solver.cutoff must be int or \"auto\"");
    return c.get<int>();
}

std::filesystem::path output_dir(const json& j, const std::string& out_flag) {
    std::filesystem::path dir = out_flag.empty() ? "." : out_flag;
    if (j.contains("output")) {
        reject_unknown(j["output"], "output.", {"directory", "formats"});
        if (out_flag.empty() && j["output"].contains("directory"))
            dir = j["output"]["directory"].get<std::string>();
    }
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::vector<double> grid_from_config(const json& j, const std::string& where, double lo_d,
                                     double hi_d, int count_d) {
    double lo = lo_d, hi = hi_d;
    int count = count_d;
    if (!j.is_null()) {
        reject_unknown(j, where + ".", {"lo", "hi", "count"});
        lo = opt_num(j, where + ".", "lo", lo_d);
        hi = opt_num(j, where + ".", "hi", hi_d);
        count = opt_int(j, where + ".", "count", count_d);
    }
    if (count < 1 || hi < lo) throw ConfigError("bad grid: " + where);
    return linspace(lo, hi, count);
}

std::vector<FamilySpec> families_from_config(const json& js, const std::string& where,
                                             std::vector<FamilySpec> fallback) {
    if (!js.contains("families")) return fallback;
    if (!js["families"].is_array()) throw ConfigError("not an array: " + where + "families");
    std::vector<FamilySpec> out;
    for (const auto& jf : js["families"]) {
        if (!jf.is_object()) throw ConfigError(where + "families entries must be objects");
        reject_unknown(jf, where + "families[].", {"family", "k"});
        if (!jf.contains("family") || !jf["family"].is_string())
            throw ConfigError("missing key: " + where + "families[].family");
        FamilySpec f;
        try {
            f.family = family_from_name(jf["family"].get<std::string>());
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(ex.what());
        }
        f.k = opt_int(jf, where + "families[].", "k", 1);
        out.push_back(f);
    }
    if (out.empty()) throw ConfigError(where + "families must not be empty");
    return out;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_design(double eta, const std::string& export_dir) {
    const DesignPoint dp = lemniscate_design_point();
    std::cout << "a0 = " << fmt_num(dp.a0) << "\n";
    std::cout << "A0 = " << fmt_num(dp.A0) << "\n";

    const Pulse lem = make_lemniscate(dp.a0, dp.A0, 1.0, eta);
    const MagnusCoefficients mc = magnus_coefficients(integrate_trajectory(lem, eta));
    const MagnusCoefficients me =
        magnus_coefficients(integrate_trajectory(echo_transform(lem), eta));

    const double chi_err = std::abs(mc.chi - pi / 4);
    const double chi_err_e = std::abs(me.chi - pi / 4);
    std::cout << "chi(lemniscate)          = " << fmt_num(mc.chi) << "  |chi - pi/4| = "
              << fmt_num(chi_err) << "\n";
    std::cout << "theta4(lemniscate)       = " << fmt_num(mc.theta4) << "\n";
    std::cout << "chi(echoed lemniscate)   = " << fmt_num(me.chi) << "  |chi - pi/4| = "
              << fmt_num(chi_err_e) << "\n";
    std::cout << "theta4(echoed)           = " << fmt_num(me.theta4) << "\n";
    std::cout << "|g|(echoed)              = " << fmt_num(std::abs(me.g)) << "\n";

    bool ok = std::abs(dp.a0 - 0.7274789) < 1e-6 && std::abs(dp.A0 - 0.95778915) < 1e-6;
    ok = ok && chi_err <= 1e-8 && chi_err_e <= 1e-8;
    ok = ok && std::abs(mc.theta4) <= 1e-8 * eta * eta;
    ok = ok && std::abs(me.theta4) <= 1e-8 * eta * eta;
    ok = ok && std::abs(me.g) <= 1e-10;
    std::cout << (ok ? "design verification: OK" : "design verification: FAILED") << "\n";

    if (!export_dir.empty()) {
        std::filesystem::create_directories(export_dir);
        const DesignPoint d = dp;
        const Pulse rect = make_rectangular(1, 1.0, eta);
        const std::vector<std::pair<std::string, Pulse>> pulses = {
            {"rectangular", rect},
            {"echoed_rectangular", echo_transform(rect)},
            {"lemniscate", make_lemniscate(d.a0, d.A0, 1.0, eta)},
            {"echoed_lemniscate", echo_transform(make_lemniscate(d.a0, d.A0, 1.0, eta))}};
        for (const auto& [name, p] : pulses) {
            std::ostringstream pcsv, tcsv;
            write_pulse_csv(pcsv, p);
            write_trajectory_csv(tcsv, integrate_trajectory(p, eta));
            write_file(std::filesystem::path(export_dir) / ("pulse_" + name + ".csv"),
                       pcsv.str());
            write_file(std::filesystem::path(export_dir) / ("trajectory_" + name + ".csv"),
                       tcsv.str());
        }
        std::cout << "exported pulse and trajectory tables to " << export_dir << "\n";
    }
    return ok ? exit_ok : 1;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag, int workers) {
    const json j = load_config(config_path);
    reject_unknown(j, "", {"pulse", "physics", "solver", "output"});
    if (!j.contains("pulse")) throw ConfigError("missing key: pulse");
    if (!j.contains("physics")) throw ConfigError("missing key: physics");
    reject_unknown(j["physics"], "physics.", {"n", "eta"});

    SimulationConfig cfg;
    cfg.n = need_int(j["physics"], "physics.", "n");
    cfg.eta = need_num(j["physics"], "physics.", "eta");
    if (cfg.n < 2) throw ConfigError("physics.n must be >= 2");
    if (cfg.eta <= 0.0 || cfg.eta >= 1.0) throw ConfigError("physics.eta must lie in (0, 1)");
    cfg.pulse = pulse_from_config(j["pulse"], cfg.eta);
    cfg.solver = solver_from_config(j, workers);
    cfg.cutoff = config_cutoff(j);

    const auto dir = output_dir(j, out_flag);
    const auto t0 = std::chrono::steady_clock::now();
    const SimulationResult res = simulate(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_file(dir / "result.json", result_to_json(cfg, res) + "\n");
    json meta;
    meta["command"] = "simulate";
    meta["config_path"] = config_path;
    meta["wall_seconds"] = secs;
    write_file(dir / "run_meta.json", meta.dump(2) + "\n");

    std::cout << "infidelity = " << fmt_num(res.infidelity)
              << "  phonon_prob = " << fmt_num(res.phonon_prob) << "\n";
    std::cout << "wrote " << (dir / "result.json").string() << "\n";
    return res.diagnostics.converged ? exit_ok : exit_convergence;
}

int cmd_scan(const std::string& config_path, const std::string& out_flag, int workers) {
    const json j = load_config(config_path);
    reject_unknown(j, "", {"scan", "physics", "solver", "output"});
    if (!j.contains("scan")) throw ConfigError("missing key: scan");
    const json& js = j["scan"];
    if (!js.contains("type") || !js["type"].is_string())
        throw ConfigError("missing key: scan.type");
    const std::string type = js["type"].get<std::string>();

    ScanOptions opts;
    opts.solver = solver_from_config(j, 0);
    opts.solver.throw_on_budget = false;
    opts.workers = workers > 0 ? workers : opts.solver.workers;
    // grid scans parallelize over points; sweeps and refinements run their
    // simulations sequentially and parallelize over blocks instead
    if (type == "amplitude" || type == "lemniscate2d") opts.solver.workers = 1;

    const json physics = j.contains("physics") ? j["physics"] : json::object();
    reject_unknown(physics, "physics.", {"n", "eta"});
    const auto dir = output_dir(j, out_flag);
    const auto t0 = std::chrono::steady_clock::now();

    std::string written;
    if (type == "amplitude") {
        reject_unknown(js, "scan.", {"type", "n_list", "k", "family", "domega", "refine"});
        const double eta = need_num(physics, "physics.", "eta");
        const int k = opt_int(js, "scan.", "k", 1);
        PulseFamily family = PulseFamily::rectangular;
        if (js.contains("family")) family = family_from_name(js["family"].get<std::string>());
        std::vector<int> ns;
        if (js.contains("n_list"))
            ns = js["n_list"].get<std::vector<int>>();
        else
            ns.push_back(need_int(physics, "physics.", "n"));
        const auto grid = grid_from_config(js.contains("domega") ? js["domega"] : json(),
                                           "scan.domega", -0.01, 0.02, 61);
        if (js.contains("refine")) opts.refine = js["refine"].get<bool>();
        std::vector<std::pair<int, AmplitudeScanResult>> scans;
        for (int n : ns) scans.push_back({n, amplitude_scan(n, eta, k, family, grid, opts)});
        std::ostringstream os;
        write_fig2_csv(os, scans);
        write_file(dir / "fig2.csv", os.str());
        // inset table: analytic S_x^4 and phonon contributions vs n
        double theta4 = rectangular_theta4(eta, k);
        cplx g{0.0, -rectangular_g_mag(eta, k)};
        if (family == PulseFamily::echoed_rectangular) {
            theta4 *= 0.5;
            g = cplx{0.0, 0.0};
        }
        std::ostringstream osi;
        write_fig2_inset_csv(osi, contribution_table(ns, theta4, g));
        write_file(dir / "fig2_inset.csv", osi.str());
        written = "fig2.csv";
    } else if (type == "lemniscate2d") {
        reject_unknown(js, "scan.", {"type", "da", "dA", "refine"});
        const double eta = need_num(physics, "physics.", "eta");
        const int n = need_int(physics, "physics.", "n");
        const DesignPoint dp = lemniscate_design_point();
        const auto da = grid_from_config(js.contains("da") ? js["da"] : json(), "scan.da",
                                         -0.01, 0.01, 41);
        const auto dA = grid_from_config(js.contains("dA") ? js["dA"] : json(), "scan.dA",
                                         0.0, 0.02 * dp.A0, 41);
        if (js.contains("refine")) opts.refine = js["refine"].get<bool>();
        const ScanResult scan = lemniscate_scan_2d(n, eta, da, dA, opts);
        std::ostringstream os;
        write_fig3_csv(os, scan);
        write_file(dir / "fig3.csv", os.str());
        std::cout << "optimum: da = " << fmt_num(scan.optimum.x)
                  << "  dA = " << fmt_num(scan.optimum.y)
                  << "  infidelity = " << fmt_num(scan.optimum.infidelity) << "\n";
        written = "fig3.csv";
    } else if (type == "eta_sweep") {
        reject_unknown(js, "scan.", {"type", "eta_list", "families"});
        const int n = need_int(physics, "physics.", "n");
        std::vector<double> etas{0.02, 0.025, 0.03, 0.04, 0.05};
        if (js.contains("eta_list")) etas = js["eta_list"].get<std::vector<double>>();
        const auto families = families_from_config(
            js, "scan.",
            {{PulseFamily::rectangular, 1},
             {PulseFamily::echoed_rectangular, 1},
             {PulseFamily::echoed_lemniscate, 0}});
        const auto rows = eta_sweep(n, etas, families, opts);
        std::ostringstream os;
        write_fig4_csv(os, rows);
        write_file(dir / "fig4.csv", os.str());
        written = "fig4.csv";
    } else if (type == "n_sweep") {
        reject_unknown(js, "scan.", {"type", "n_list", "families"});
        const double eta = need_num(physics, "physics.", "eta");
        std::vector<int> ns{4, 8, 12, 16, 20};
        if (js.contains("n_list")) ns = js["n_list"].get<std::vector<int>>();
        const auto families = families_from_config(
            js, "scan.",
            {{PulseFamily::rectangular, 1},
             {PulseFamily::echoed_rectangular, 1},
             {PulseFamily::lemniscate, 0},
             {PulseFamily::echoed_lemniscate, 0}});
        const auto rows = n_sweep(eta, ns, families, opts);
        std::ostringstream os;
        write_fig5_csv(os, rows);
        write_file(dir / "fig5.csv", os.str());
        written = "fig5.csv";
    } else {
        throw ConfigError("unknown scan.type: " + type);
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json meta;
    meta["command"] = "scan";
    meta["type"] = type;
    meta["config_path"] = config_path;
    meta["wall_seconds"] = secs;
    write_file(dir / "scan_meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << (dir / written).string() << "\n";
    return exit_ok;
}

int cmd_chain(int n_min, int n_max, double radial_mhz, double recoil_hz,
              const std::string& format) {
    const double radial = two_pi * radial_mhz * 1e6;
    const double recoil = two_pi * recoil_hz;
    const auto rows = chain_table(n_min, n_max, radial, recoil);
    if (format == "csv") {
        std::cout << "n,anisotropy,omega_axial_max_hz,eta\n";
        for (const auto& r : rows)
            std::cout << r.n << ',' << fmt_num(r.anisotropy) << ','
                      << fmt_num(r.omega_axial_max / two_pi) << ',' << fmt_num(r.eta) << '\n';
    } else {
        std::cout << "  n   a_n      max axial (kHz)   eta\n";
        char buf[96];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%3d   %7.4f   %10.3f     %.5f\n", r.n,
                          r.anisotropy, r.omega_axial_max / two_pi / 1e3, r.eta);
            std::cout << buf;
        }
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulse design and verification for GHZ state preparation in ion chains"};
    app.require_subcommand(1);

    int workers = 0;
    app.add_option("--workers", workers, "worker thread count (or env GHZPULSE_WORKERS)");

    auto* design = app.add_subcommand("design", "verify the lemniscate design point");
    double design_eta = 0.03;
    std::string export_dir;
    design->add_option("--eta", design_eta, "Lamb-Dicke parameter for verification");
    design->add_option("--export", export_dir, "directory for pulse/trajectory CSV tables");

    auto* sim = app.add_subcommand("simulate", "run one simulation from a JSON config");
    std::string sim_config, sim_out;
    sim->add_option("--config", sim_config, "JSON config path")->required();
    sim->add_option("--out", sim_out, "output directory");

    auto* scan = app.add_subcommand("scan", "run a figure scan from a JSON config");
    std::string scan_config, scan_out;
    scan->add_option("--config", scan_config, "JSON config path")->required();
    scan->add_option("--out", scan_out, "output directory");

    auto* chain = app.add_subcommand("chain", "linear-chain stability and Lamb-Dicke table");
    int n_min = 2, n_max = 20;
    double radial_mhz = 3.0, recoil_hz = 9390.6;
    std::string chain_format = "table";
    chain->add_option("--n-min", n_min, "smallest ion count");
    chain->add_option("--n-max", n_max, "largest ion count");
    chain->add_option("--radial-mhz", radial_mhz, "radial trap frequency, MHz");
    chain->add_option("--recoil-hz", recoil_hz, "recoil frequency, Hz");
    chain->add_option("--format", chain_format, "table or csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed()) return cmd_design(design_eta, export_dir);
        if (sim->parsed()) return cmd_simulate(sim_config, sim_out, workers);
        if (scan->parsed()) return cmd_scan(scan_config, scan_out, workers);
        if (chain->parsed()) return cmd_chain(n_min, n_max, radial_mhz, recoil_hz, chain_format);
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return exit_config;
    } catch (const ConvergenceError& ex) {
        std::cerr << "convergence failure: " << ex.what() << "\n";
        return exit_convergence;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return exit_ok;
}

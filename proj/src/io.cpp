#include "ghz/io.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace ghz {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

std::string family_label(const FamilySpec& f) {
    std::string s = family_name(f.family);
    if (f.family == PulseFamily::rectangular || f.family == PulseFamily::echoed_rectangular)
        s += "_k" + std::to_string(f.k);
    return s;
}

void write_fig2_csv(std::ostream& os,
                    const std::vector<std::pair<int, AmplitudeScanResult>>& scans) {
    os << "n,domega_rel,infidelity,analytic_cross,error\n";
    for (const auto& [n, scan] : scans) {
        for (const auto& pt : scan.grid)
            write_csv_row(os, {std::to_string(n), fmt_num(pt.x), fmt_num(pt.infidelity), "0",
                               pt.error});
        write_csv_row(os, {std::to_string(n), fmt_num(scan.analytic_domega_rel),
                           fmt_num(scan.analytic_infidelity), "1", ""});
    }
}

void write_fig2_inset_csv(std::ostream& os, const std::vector<ContributionRow>& rows) {
    os << "n,sx4_contribution,phonon_contribution\n";
    for (const auto& r : rows)
        write_csv_row(os, {std::to_string(r.n), fmt_num(r.sx4), fmt_num(r.phonon)});
}

void write_fig3_csv(std::ostream& os, const ScanResult& scan) {
    os << "da,dA,infidelity,error\n";
    for (const auto& pt : scan.grid)
        write_csv_row(os, {fmt_num(pt.x), fmt_num(pt.y), fmt_num(pt.infidelity), pt.error});
}

void write_fig4_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "family,eta,infidelity,phonon_prob,error\n";
    for (const auto& r : rows)
        write_csv_row(os, {family_label(r.family), fmt_num(r.x), fmt_num(r.infidelity),
                           fmt_num(r.phonon_prob), r.error});
}

void write_fig5_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "family,n,infidelity,error\n";
    for (const auto& r : rows)
        write_csv_row(os, {family_label(r.family), std::to_string(static_cast<int>(r.x)),
                           fmt_num(r.infidelity), r.error});
}

std::string result_to_json(const SimulationConfig& config, const SimulationResult& result) {
    nlohmann::json j;
    j["config"]["n"] = config.n;
    j["config"]["eta"] = config.eta;
    j["config"]["pulse"]["family"] = family_name(config.pulse.family);
    j["config"]["pulse"]["t_gate"] = config.pulse.duration;
    j["config"]["pulse"]["detuning"] = config.pulse.detuning;
    if (config.pulse.family == PulseFamily::rectangular ||
        config.pulse.family == PulseFamily::echoed_rectangular)
        j["config"]["pulse"]["k"] = config.pulse.k;
    if (config.pulse.family == PulseFamily::lemniscate ||
        config.pulse.family == PulseFamily::echoed_lemniscate) {
        j["config"]["pulse"]["a"] = config.pulse.a;
        j["config"]["pulse"]["A"] = config.pulse.A;
    }
    if (config.pulse.amp_scale != 1.0) j["config"]["pulse"]["amp_scale"] = config.pulse.amp_scale;
    j["config"]["solver"]["time_steps"] = config.solver.time_steps;
    j["config"]["solver"]["step_tol"] = config.solver.step_tol;
    j["config"]["solver"]["cutoff_tol"] = config.solver.cutoff_tol;

    j["fidelity"] = result.fidelity;
    j["infidelity"] = result.infidelity;
    j["phonon_prob"] = result.phonon_prob;

    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : result.blocks) {
        nlohmann::json jb;
        jb["m"] = b.m;
        jb["cutoff"] = b.cutoff;
        jb["overlap_re"] = b.overlap.real();
        jb["overlap_im"] = b.overlap.imag();
        jb["norm_error"] = b.norm_error;
        jb["leakage"] = b.leakage;
        blocks.push_back(jb);
    }
    j["blocks"] = blocks;

    j["diagnostics"]["steps_used"] = result.diagnostics.steps_used;
    j["diagnostics"]["ladder_rungs"] = result.diagnostics.ladder_rungs;
    j["diagnostics"]["converged"] = result.diagnostics.converged;
    j["diagnostics"]["exact_path"] = result.diagnostics.exact_path;
    j["diagnostics"]["richardson_delta"] = result.diagnostics.richardson_delta;
    j["diagnostics"]["cutoff_delta"] = result.diagnostics.cutoff_delta;
    j["diagnostics"]["max_norm_error"] = result.diagnostics.max_norm_error;
    j["diagnostics"]["max_leakage"] = result.diagnostics.max_leakage;
    if (!result.diagnostics.message.empty())
        j["diagnostics"]["message"] = result.diagnostics.message;
    return j.dump(2);
}

} // namespace ghz

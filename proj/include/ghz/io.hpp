#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ghz/optimize.hpp"
#include "ghz/perturbative.hpp"
#include "ghz/tdse.hpp"

namespace ghz {

// Deterministic number formatting for data files (shortest round-trip-safe
// representation, no locale).
std::string fmt_num(double v);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

// fig2.csv: n, domega_rel, infidelity, analytic_cross, error
void write_fig2_csv(std::ostream& os,
                    const std::vector<std::pair<int, AmplitudeScanResult>>& scans);
// fig2_inset.csv: n, sx4_contribution, phonon_contribution
void write_fig2_inset_csv(std::ostream& os, const std::vector<ContributionRow>& rows);
// fig3.csv: da, dA, infidelity, error
void write_fig3_csv(std::ostream& os, const ScanResult& scan);
// fig4.csv: family, eta, infidelity, phonon_prob, error
void write_fig4_csv(std::ostream& os, const std::vector<SweepRow>& rows);
// fig5.csv: family, n, infidelity, error
void write_fig5_csv(std::ostream& os, const std::vector<SweepRow>& rows);

std::string family_label(const FamilySpec& f);

// Simulation result record (config echo, fidelity, phonon probability,
// per-block overlaps, diagnostics) as a JSON string.
std::string result_to_json(const SimulationConfig& config, const SimulationResult& result);

} // namespace ghz

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ghz/tdse.hpp"

namespace ghz {

struct FamilySpec {
    PulseFamily family = PulseFamily::rectangular;
    int k = 1;  // rectangular families only
};

struct ScanPoint {
    double x = 0.0;               // first scanned coordinate
    double y = 0.0;               // second coordinate (2-D scans)
    double infidelity = 0.0;
    double phonon_prob = 0.0;
    bool failed = false;
    std::string error;
};

struct ScanResult {
    std::vector<ScanPoint> grid;
    ScanPoint optimum;            // refined; never worse than the best grid point
    std::vector<ScanPoint> valley;  // 2-D scans: per-x minimum over y
};

struct ScanOptions {
    SolverOptions solver;
    bool refine = true;
    double refine_tol = 1e-4;     // relative coordinate tolerance for golden section
    int workers = 0;
};

// Infidelity vs relative amplitude offset Omega = Omega_0 (1 + x) for the
// rectangular families, plus the analytic optimum from the perturbative model.
struct AmplitudeScanResult : ScanResult {
    double analytic_domega_rel = 0.0;
    double analytic_infidelity = 0.0;
};
AmplitudeScanResult amplitude_scan(int n, double eta, int k, PulseFamily family,
                                   const std::vector<double>& domega_grid,
                                   const ScanOptions& opts = {});

// Echoed-lemniscate infidelity surface over (da, dA) offsets from the design
// point, with per-da valley extraction and a coordinate-descent refinement.
ScanResult lemniscate_scan_2d(int n, double eta,
                              const std::vector<double>& da_grid,
                              const std::vector<double>& dA_grid,
                              const ScanOptions& opts = {});

struct SweepRow {
    FamilySpec family;
    double x = 0.0;              // eta (eta_sweep) or n (n_sweep)
    double infidelity = 0.0;
    double phonon_prob = 0.0;
    bool failed = false;
    std::string error;
};

// Per family: re-optimized infidelity at each eta (amplitude for rectangular
// families, (da, dA) coordinate descent for lemniscate families).
std::vector<SweepRow> eta_sweep(int n, const std::vector<double>& etas,
                                const std::vector<FamilySpec>& families,
                                const ScanOptions& opts = {});

std::vector<SweepRow> n_sweep(double eta, const std::vector<int>& ns,
                              const std::vector<FamilySpec>& families,
                              const ScanOptions& opts = {});

// Least-squares slope of log(y) vs log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Single re-optimized point (used by the sweeps; exposed for tests).
struct OptimizedPoint {
    double infidelity = 0.0;
    double phonon_prob = 0.0;
    double p1 = 0.0, p2 = 0.0;  // optimal offsets: (domega_rel) or (da, dA)
};
OptimizedPoint optimize_family(const FamilySpec& fam, int n, double eta,
                               const ScanOptions& opts = {},
                               std::optional<OptimizedPoint> warm_start = {});

} // namespace ghz

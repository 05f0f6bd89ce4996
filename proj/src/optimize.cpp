#include "ghz/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "ghz/perturbative.hpp"
#include "ghz/trajectory.hpp"
#include "ghz/util.hpp"

namespace ghz {

namespace {

Pulse family_pulse(const FamilySpec& fam, double eta, double p1, double p2) {
    const double t_gate = 1.0;
    switch (fam.family) {
        case PulseFamily::rectangular:
            return make_rectangular(fam.k, t_gate, eta).scaled(1.0 + p1);
        case PulseFamily::echoed_rectangular:
            return echo_transform(make_rectangular(fam.k, t_gate, eta)).scaled(1.0 + p1);
        case PulseFamily::lemniscate: {
            const DesignPoint dp = lemniscate_design_point();
            return make_lemniscate(dp.a0 + p1, dp.A0 + p2, t_gate, eta);
        }
        case PulseFamily::echoed_lemniscate: {
            const DesignPoint dp = lemniscate_design_point();
            return echo_transform(make_lemniscate(dp.a0 + p1, dp.A0 + p2, t_gate, eta));
        }
        default: throw std::invalid_argument("family_pulse: custom family has no parameters");
    }
}

struct EvalPoint {
    double infidelity = 0.0;
    double phonon_prob = 0.0;
};

EvalPoint eval_point(const FamilySpec& fam, int n, double eta, double p1, double p2,
                     const SolverOptions& solver) {
    SimulationConfig cfg;
    cfg.n = n;
    cfg.eta = eta;
    cfg.pulse = family_pulse(fam, eta, p1, p2);
    cfg.solver = solver;
    const SimulationResult res = simulate(cfg);
    return {res.infidelity, res.phonon_prob};
}

// Sequential refinement stages hand the full worker pool to the block solver.
SolverOptions refine_solver(const ScanOptions& opts) {
    SolverOptions s = opts.solver;
    if (opts.workers > 0) s.workers = opts.workers;
    return s;
}

constexpr double golden_ratio = 0.6180339887498949;

// Golden-section minimum of f on [lo, hi] to absolute coordinate tolerance.
// Returns {x, f(x)}.
std::pair<double, double> golden_min(const std::function<double(double)>& f, double lo,
                                     double hi, double xtol) {
    double x1 = hi - golden_ratio * (hi - lo);
    double x2 = lo + golden_ratio * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > xtol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden_ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden_ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// Golden search that widens the window when the minimum sits at an edge.
std::pair<double, double> golden_min_expand(const std::function<double(double)>& f, double lo,
                                            double hi, double xtol, double lo_bound,
                                            double hi_bound) {
    for (int round = 0; round < 4; ++round) {
        auto [x, fx] = golden_min(f, lo, hi, xtol);
        const double w = hi - lo;
        const bool at_lo = x - lo < 0.05 * w && lo > lo_bound;
        const bool at_hi = hi - x < 0.05 * w && hi < hi_bound;
        if (!at_lo && !at_hi) return {x, fx};
        if (at_lo) lo = std::max(lo_bound, lo - w);
        if (at_hi) hi = std::min(hi_bound, hi + w);
    }
    return golden_min(f, lo, hi, xtol);
}

// The (da, dA) infidelity surface has a narrow, nearly linear valley
// (dA* ~ 2 da); coordinate descent zigzags on it, so the lemniscate optimum
// is found by minimizing the valley floor: an outer golden search over da
// whose objective is an inner golden minimization over dA. The inner window
// is centered on a linear prediction of the valley line from the inner
// minima already found.
struct ValleyPoint {
    double da = 0.0, dA = 0.0, infidelity = 0.0;
};

class ValleyMinimizer {
  public:
    ValleyMinimizer(std::function<double(double, double)> f, double dA_guess,
                    double dA_halfwidth, double dA_lo, double dA_hi, double xtol_inner)
        : f_(std::move(f)), dA_guess_(dA_guess), dA_halfwidth_(dA_halfwidth), dA_lo_(dA_lo),
          dA_hi_(dA_hi), xtol_inner_(xtol_inner) {}

    // valley floor value at da (inner minimization over dA)
    double floor(double da) {
        const double center = predict(da);
        const double w = records_.empty() ? dA_halfwidth_ : std::max(1.2e-3, 4.0 * xtol_inner_);
        auto g = [&](double dA) { return f_(da, dA); };
        auto [dA, val] = golden_min_expand(g, std::max(dA_lo_, center - w),
                                           std::min(dA_hi_, center + w), xtol_inner_, dA_lo_,
                                           dA_hi_);
        records_.push_back({da, dA, val});
        return val;
    }

    ValleyPoint best() const {
        ValleyPoint b = records_.front();
        for (const auto& r : records_)
            if (r.infidelity < b.infidelity) b = r;
        return b;
    }

  private:
    double predict(double da) const {
        if (records_.empty()) return dA_guess_;
        if (records_.size() == 1) return records_[0].dA;
        // linear prediction from the two records nearest in da
        const ValleyPoint* p1 = &records_[0];
        const ValleyPoint* p2 = &records_[1];
        for (const auto& r : records_) {
            if (std::abs(r.da - da) < std::abs(p1->da - da)) {
                p2 = p1;
                p1 = &r;
            } else if (&r != p1 && std::abs(r.da - da) < std::abs(p2->da - da)) {
                p2 = &r;
            }
        }
        if (p1->da == p2->da) return p1->dA;
        const double slope = (p2->dA - p1->dA) / (p2->da - p1->da);
        return p1->dA + slope * (da - p1->da);
    }

    std::function<double(double, double)> f_;
    double dA_guess_, dA_halfwidth_, dA_lo_, dA_hi_, xtol_inner_;
    std::vector<ValleyPoint> records_;
};

ValleyPoint minimize_lemniscate(const std::function<double(double, double)>& f,
                                double da_center, double da_halfwidth, double da_lo,
                                double dA_guess, double dA_halfwidth, double dA_hi,
                                double xtol) {
    ValleyMinimizer vm(f, dA_guess, dA_halfwidth, -dA_hi, dA_hi, 0.25 * xtol);
    auto floor_fn = [&](double da) { return vm.floor(da); };
    golden_min_expand(floor_fn, std::max(da_lo, da_center - da_halfwidth),
                      da_center + da_halfwidth, xtol, da_lo, 0.25);
    return vm.best();
}

// theta4 and g of the family at its nominal gate parameters (closed forms).
void family_theta4_g(const FamilySpec& fam, double eta, double& theta4, cplx& g) {
    switch (fam.family) {
        case PulseFamily::rectangular:
            theta4 = rectangular_theta4(eta, fam.k);
            g = cplx{0.0, -rectangular_g_mag(eta, fam.k)};
            break;
        case PulseFamily::echoed_rectangular:
            theta4 = 0.5 * rectangular_theta4(eta, fam.k);
            g = cplx{0.0, 0.0};
            break;
        default:
            theta4 = 0.0;
            g = cplx{0.0, 0.0};
            break;
    }
}

} // namespace

AmplitudeScanResult amplitude_scan(int n, double eta, int k, PulseFamily family,
                                   const std::vector<double>& domega_grid,
                                   const ScanOptions& opts) {
    if (family != PulseFamily::rectangular && family != PulseFamily::echoed_rectangular)
        throw std::invalid_argument("amplitude_scan: rectangular families only");
    if (domega_grid.empty()) throw std::invalid_argument("amplitude_scan: empty grid");
    FamilySpec fam{family, k};

    AmplitudeScanResult out;
    out.grid.resize(domega_grid.size());
    parallel_for(
        domega_grid.size(),
        [&](std::size_t i) {
            ScanPoint pt;
            pt.x = domega_grid[i];
            try {
                const EvalPoint ev = eval_point(fam, n, eta, pt.x, 0.0, opts.solver);
                pt.infidelity = ev.infidelity;
                pt.phonon_prob = ev.phonon_prob;
            } catch (const std::exception& ex) {
                pt.failed = true;
                pt.error = ex.what();
            }
            out.grid[i] = pt;
        },
        opts.workers);

    // analytic cross from the perturbative model
    double theta4;
    cplx g;
    family_theta4_g(fam, eta, theta4, g);
    const PerturbativePrediction pred = optimal_prediction(n, theta4, g, eta);
    out.analytic_domega_rel = pred.delta_omega_rel;
    out.analytic_infidelity = pred.infidelity;

    // best grid point, then golden refinement inside its bracket
    std::size_t best = 0;
    for (std::size_t i = 0; i < out.grid.size(); ++i)
        if (!out.grid[i].failed &&
            (out.grid[best].failed || out.grid[i].infidelity < out.grid[best].infidelity))
            best = i;
    out.optimum = out.grid[best];
    if (opts.refine && !out.grid[best].failed && out.grid.size() >= 2) {
        const SolverOptions rs = refine_solver(opts);
        const double lo = domega_grid[best > 0 ? best - 1 : 0];
        const double hi = domega_grid[std::min(best + 1, domega_grid.size() - 1)];
        auto f = [&](double x) { return eval_point(fam, n, eta, x, 0.0, rs).infidelity; };
        auto [x, fx] = golden_min(f, lo, hi, opts.refine_tol * std::max(1e-3, hi - lo));
        if (fx < out.optimum.infidelity) {
            out.optimum.x = x;
            out.optimum.infidelity = fx;
            out.optimum.phonon_prob = eval_point(fam, n, eta, x, 0.0, rs).phonon_prob;
        }
    }
    return out;
}

ScanResult lemniscate_scan_2d(int n, double eta, const std::vector<double>& da_grid,
                              const std::vector<double>& dA_grid, const ScanOptions& opts) {
    if (da_grid.empty() || dA_grid.empty())
        throw std::invalid_argument("lemniscate_scan_2d: empty grid");
    const DesignPoint dp = lemniscate_design_point();
    for (double da : da_grid)
        if (dp.a0 + da <= 0.5)
            throw std::invalid_argument("lemniscate_scan_2d: grid leaves the figure-eight regime");
    FamilySpec fam{PulseFamily::echoed_lemniscate, 0};

    ScanResult out;
    const std::size_t nx = da_grid.size(), ny = dA_grid.size();
    out.grid.resize(nx * ny);
    parallel_for(
        nx * ny,
        [&](std::size_t idx) {
            const std::size_t i = idx / ny, j = idx % ny;
            ScanPoint pt;
            pt.x = da_grid[i];
            pt.y = dA_grid[j];
            try {
                const EvalPoint ev = eval_point(fam, n, eta, pt.x, pt.y, opts.solver);
                pt.infidelity = ev.infidelity;
                pt.phonon_prob = ev.phonon_prob;
            } catch (const std::exception& ex) {
                pt.failed = true;
                pt.error = ex.what();
            }
            out.grid[idx] = pt;
        },
        opts.workers);

    // valley: per-da minimum over dA
    out.valley.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        std::size_t best = i * ny;
        for (std::size_t j = 1; j < ny; ++j)
            if (!out.grid[i * ny + j].failed &&
                (out.grid[best].failed || out.grid[i * ny + j].infidelity < out.grid[best].infidelity))
                best = i * ny + j;
        out.valley[i] = out.grid[best];
    }

    // refinement: valley-floor minimization from the best grid point
    std::size_t best = 0;
    for (std::size_t idx = 0; idx < out.grid.size(); ++idx)
        if (!out.grid[idx].failed &&
            (out.grid[best].failed || out.grid[idx].infidelity < out.grid[best].infidelity))
            best = idx;
    out.optimum = out.grid[best];
    if (opts.refine && !out.grid[best].failed) {
        const SolverOptions rs = refine_solver(opts);
        auto f = [&](double x, double y) {
            return eval_point(fam, n, eta, x, y, rs).infidelity;
        };
        const double wa =
            std::max(2e-3, (da_grid.back() - da_grid.front()) / (nx > 1 ? nx - 1. : 1.));
        const double wA =
            std::max(2e-3, (dA_grid.back() - dA_grid.front()) / (ny > 1 ? ny - 1. : 1.));
        const ValleyPoint vp =
            minimize_lemniscate(f, out.optimum.x, 2.0 * wa, 0.5 - dp.a0 + 1e-3, out.optimum.y,
                                2.0 * wA, 0.5 * dp.A0, opts.refine_tol);
        if (vp.infidelity < out.optimum.infidelity) {
            out.optimum.x = vp.da;
            out.optimum.y = vp.dA;
            out.optimum.infidelity = vp.infidelity;
            out.optimum.phonon_prob =
                eval_point(fam, n, eta, vp.da, vp.dA, rs).phonon_prob;
        }
    }
    return out;
}

OptimizedPoint optimize_family(const FamilySpec& fam, int n, double eta,
                               const ScanOptions& opts,
                               std::optional<OptimizedPoint> warm_start) {
    OptimizedPoint out;
    const SolverOptions rs = refine_solver(opts);
    if (fam.family == PulseFamily::rectangular ||
        fam.family == PulseFamily::echoed_rectangular) {
        double theta4;
        cplx g;
        family_theta4_g(fam, eta, theta4, g);
        const double center =
            warm_start ? warm_start->p1 : optimal_amplitude(n, theta4, eta).delta_omega_rel;
        const double w = std::max(0.01, std::abs(center));
        auto f = [&](double x) { return eval_point(fam, n, eta, x, 0.0, rs).infidelity; };
        auto [x, fx] =
            golden_min_expand(f, center - w, center + w, opts.refine_tol, -0.5, 1.0);
        out.p1 = x;
        out.infidelity = fx;
        out.phonon_prob = eval_point(fam, n, eta, x, 0.0, rs).phonon_prob;
        return out;
    }

    // lemniscate families: valley-floor minimization on (da, dA); the eta^2
    // drift of the optimum motivates the warm-start scaling used by the sweeps
    const DesignPoint dp = lemniscate_design_point();
    const double scale = (eta / 0.03) * (eta / 0.03);
    const double da0 = warm_start ? warm_start->p1 : 3e-3 * scale;
    const double dA0 = warm_start ? warm_start->p2 : 6e-3 * scale;
    const double wa = warm_start ? 1.5e-3 : std::max(3e-3, 3e-3 * scale);
    const double wA = warm_start ? 2e-3 : std::max(4e-3, 6e-3 * scale);
    auto f = [&](double x, double y) {
        return eval_point(fam, n, eta, x, y, rs).infidelity;
    };
    const ValleyPoint vp = minimize_lemniscate(f, da0, wa, 0.5 - dp.a0 + 1e-3, dA0, wA,
                                               0.5 * dp.A0, opts.refine_tol);
    out.p1 = vp.da;
    out.p2 = vp.dA;
    out.infidelity = vp.infidelity;
    out.phonon_prob = eval_point(fam, n, eta, vp.da, vp.dA, rs).phonon_prob;
    return out;
}

std::vector<SweepRow> eta_sweep(int n, const std::vector<double>& etas,
                                const std::vector<FamilySpec>& families,
                                const ScanOptions& opts) {
    std::vector<SweepRow> rows;
    for (const auto& fam : families) {
        std::optional<OptimizedPoint> warm;
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t i = 0; i < etas.size(); ++i) order.push_back({etas[i], i});
        std::sort(order.begin(), order.end());
        std::vector<SweepRow> fam_rows(etas.size());
        double prev_eta = 0.0;
        for (const auto& [eta, idx] : order) {
            SweepRow row;
            row.family = fam;
            row.x = eta;
            try {
                std::optional<OptimizedPoint> start = warm;
                if (start && prev_eta > 0.0) {
                    const double s = (eta * eta) / (prev_eta * prev_eta);
                    start->p1 *= s;
                    start->p2 *= s;
                }
                const OptimizedPoint opt = optimize_family(fam, n, eta, opts, start);
                row.infidelity = opt.infidelity;
                row.phonon_prob = opt.phonon_prob;
                warm = opt;
                prev_eta = eta;
            } catch (const std::exception& ex) {
                row.failed = true;
                row.error = ex.what();
            }
            fam_rows[idx] = row;
        }
        rows.insert(rows.end(), fam_rows.begin(), fam_rows.end());
    }
    return rows;
}

std::vector<SweepRow> n_sweep(double eta, const std::vector<int>& ns,
                              const std::vector<FamilySpec>& families,
                              const ScanOptions& opts) {
    std::vector<SweepRow> rows;
    for (const auto& fam : families) {
        std::optional<OptimizedPoint> warm;
        for (int n : ns) {
            SweepRow row;
            row.family = fam;
            row.x = n;
            try {
                const OptimizedPoint opt = optimize_family(fam, n, eta, opts, warm);
                row.infidelity = opt.infidelity;
                row.phonon_prob = opt.phonon_prob;
                warm = opt;
            } catch (const std::exception& ex) {
                row.failed = true;
                row.error = ex.what();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need >= 2 matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace ghz

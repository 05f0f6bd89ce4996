#include "ghz/tdse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ghz/trajectory.hpp"
#include "ghz/util.hpp"

namespace ghz {

namespace {

double vec_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Per-step propagator: w = exp(-i dt (kappa E + kappa* E^dag)) v via Hermitian
// Lanczos on the tridiagonal action. Exact for the constant midpoint
// Hamiltonian, so the stepper error is purely the 2nd-order midpoint sampling.
// ---------------------------------------------------------------------------
struct LanczosWS {
    std::vector<std::vector<cplx>> V;
    std::vector<double> a, b;
    std::vector<cplx> w;
};

void tridiag_apply(const std::vector<double>& e, cplx kap, const std::vector<cplx>& v,
                   std::vector<cplx>& out) {
    const std::size_t n = v.size();
    const cplx kapc = std::conj(kap);
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx w{0.0, 0.0};
        if (j + 1 < n) w += kap * e[j] * v[j + 1];
        if (j > 0) w += kapc * e[j - 1] * v[j - 1];
        out[j] = w;
    }
}

void lanczos_exp_step(const std::vector<double>& e, cplx kappa, double dt,
                      std::vector<cplx>& v, LanczosWS& ws) {
    if (kappa == cplx{0.0, 0.0}) return;
    const int N = static_cast<int>(v.size());
    const double beta0 = vec_norm(v);
    if (beta0 == 0.0) return;

    double max_e = 0.0;
    for (double x : e) max_e = std::max(max_e, std::abs(x));
    const double rho = 2.0 * std::abs(kappa) * dt * max_e;
    int want = std::clamp(static_cast<int>(std::ceil(rho)) + 12, 6, std::min(N, 96));

    ws.a.clear();
    ws.b.clear();
    if (ws.V.empty()) ws.V.emplace_back();
    ws.V[0] = v;
    for (auto& z : ws.V[0]) z /= beta0;

    int k = 0;
    double next_beta = 0.0;
    bool breakdown = false;
    while (true) {
        while (k < want) {
            tridiag_apply(e, kappa, ws.V[k], ws.w);
            cplx dot{0.0, 0.0};
            for (int i = 0; i < N; ++i) dot += std::conj(ws.V[k][i]) * ws.w[i];
            const double ak = dot.real();
            ws.a.push_back(ak);
            for (int i = 0; i < N; ++i) ws.w[i] -= ak * ws.V[k][i];
            if (k > 0) {
                const double bk = ws.b[k - 1];
                for (int i = 0; i < N; ++i) ws.w[i] -= bk * ws.V[k - 1][i];
            }
            const double bk1 = vec_norm(ws.w);
            ++k;
            if (bk1 < 1e-14 * beta0 || k >= N) {
                breakdown = true;
                next_beta = bk1;
                break;
            }
            if (k < want) {
                ws.b.push_back(bk1);
                if (static_cast<int>(ws.V.size()) <= k) ws.V.emplace_back();
                ws.V[k] = ws.w;
                for (auto& z : ws.V[k]) z /= bk1;
            } else {
                next_beta = bk1;
            }
        }

        // exp of the small tridiagonal projection
        Eigen::VectorXd diag(k), sub(std::max(k - 1, 0));
        for (int i = 0; i < k; ++i) diag[i] = ws.a[i];
        for (int i = 0; i + 1 < k; ++i) sub[i] = ws.b[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub);
        const Eigen::MatrixXd& Q = es.eigenvectors();
        const Eigen::VectorXd& lam = es.eigenvalues();
        std::vector<cplx> u(k, cplx{0.0, 0.0});
        for (int j = 0; j < k; ++j) {
            const cplx phase = (beta0 * Q(0, j)) * std::polar(1.0, -dt * lam[j]);
            for (int i = 0; i < k; ++i) u[i] += Q(i, j) * phase;
        }

        const double err = std::abs(next_beta) * std::abs(u[k - 1]) * dt;
        if (breakdown || err <= 1e-13 * beta0 || k >= std::min(N, 96)) {
            for (int i = 0; i < N; ++i) {
                cplx z{0.0, 0.0};
                for (int j = 0; j < k; ++j) z += u[j] * ws.V[j][i];
                v[i] = z;
            }
            return;
        }
        // extend the Krylov space and retry
        ws.b.push_back(next_beta);
        if (static_cast<int>(ws.V.size()) <= k) ws.V.emplace_back();
        ws.V[k] = ws.w;
        for (auto& z : ws.V[k]) z /= next_beta;
        want = std::min({want + 12, N, 96});
        if (k >= want) want = std::min(k + 1, 96);
    }
}

struct BlockRun {
    cplx overlap{1.0, 0.0};
    double norm_error = 0.0;
    double leakage = 0.0;
    int cutoff = 0;
};

double top_tail_population(const std::vector<cplx>& psi) {
    const std::size_t n = psi.size();
    const std::size_t start = n - std::max<std::size_t>(1, n / 20);
    double s = 0.0;
    for (std::size_t j = start; j < n; ++j) s += std::norm(psi[j]);
    return s;
}

bool piecewise_constant_family(PulseFamily f) {
    return f == PulseFamily::rectangular || f == PulseFamily::echoed_rectangular;
}

} // namespace

std::vector<cplx> evolve_block(const BlockHamiltonian& block, int time_steps,
                               double* peak_tail) {
    std::vector<cplx> psi(block.cutoff, cplx{0.0, 0.0});
    psi[0] = 1.0;
    if (peak_tail) *peak_tail = 0.0;
    if (block.m == 0.0) return psi;

    const double T = block.pulse.duration;
    LanczosWS ws;
    for (const auto& seg : block.pulse.segments) {
        const double len = seg.t1 - seg.t0;
        const int steps = std::max(4, static_cast<int>(std::lround(time_steps * len / T)));
        const double dt = len / steps;
        const int probe = std::max(1, steps / 64);
        for (int i = 0; i < steps; ++i) {
            const double tm = seg.t0 + (i + 0.5) * dt;
            const cplx kap = block.eta * block.m * std::conj(seg.env(tm)) *
                             std::polar(1.0, block.pulse.detuning * tm);
            lanczos_exp_step(block.offdiag, kap, dt, psi, ws);
            if (peak_tail && (i % probe == 0 || i + 1 == steps))
                *peak_tail = std::max(*peak_tail, top_tail_population(psi));
        }
    }
    return psi;
}

std::vector<cplx> evolve_block_exact(const BlockHamiltonian& block, double* peak_tail) {
    const int N = block.cutoff;
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(N);
    phi[0] = 1.0;
    if (peak_tail) *peak_tail = 0.0;
    if (block.m == 0.0)
        return std::vector<cplx>(phi.data(), phi.data() + N);

    const double delta = block.pulse.detuning;
    // rotating frame at the detuning: within each constant piece
    //   H_tilde = kappa0 E + kappa0* E^dag - delta n_hat,  kappa0 = eta m Omega*.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    double cached_mag = -1.0;
    auto propagate = [&](const Eigen::VectorXcd& u, double tau) {
        Eigen::VectorXcd w = u;
        for (int j = 0; j < N; ++j) w[j] *= std::polar(1.0, -es.eigenvalues()[j] * tau);
        const Eigen::VectorXd re = es.eigenvectors() * w.real();
        const Eigen::VectorXd im = es.eigenvectors() * w.imag();
        return Eigen::VectorXcd(re.cast<cplx>() + cplx{0.0, 1.0} * im.cast<cplx>());
    };
    for (const auto& seg : block.pulse.segments) {
        const double len = seg.t1 - seg.t0;
        const cplx omega = seg.env(0.5 * (seg.t0 + seg.t1));
        const cplx kap0 = block.eta * block.m * std::conj(omega);
        const double mag = std::abs(kap0);
        if (mag == 0.0 && delta == 0.0) continue;
        if (mag != cached_mag) {
            Eigen::VectorXd diag(N), sub(N - 1);
            for (int j = 0; j < N; ++j) diag[j] = -delta * j;
            for (int j = 0; j + 1 < N; ++j) sub[j] = mag * block.offdiag[j];
            es.computeFromTridiagonal(diag, sub);
            cached_mag = mag;
        }
        const double theta = std::arg(kap0);
        for (int j = 0; j < N; ++j) phi[j] *= std::polar(1.0, theta * j);  // D^dag
        Eigen::VectorXd re = es.eigenvectors().transpose() * phi.real();
        Eigen::VectorXd im = es.eigenvectors().transpose() * phi.imag();
        const Eigen::VectorXcd u = re.cast<cplx>() + cplx{0.0, 1.0} * im.cast<cplx>();
        if (peak_tail) {
            // tail populations are gauge independent; probe inside the piece
            for (int s = 1; s <= 16; ++s) {
                const Eigen::VectorXcd w = propagate(u, len * s / 16.0);
                std::vector<cplx> tmp(w.data(), w.data() + N);
                *peak_tail = std::max(*peak_tail, top_tail_population(tmp));
            }
        }
        phi = propagate(u, len);
        for (int j = 0; j < N; ++j) phi[j] *= std::polar(1.0, -theta * j);  // D
    }
    // leave the rotating frame at t_gate
    for (int j = 0; j < N; ++j)
        phi[j] *= std::polar(1.0, -delta * block.pulse.duration * j);
    return std::vector<cplx>(phi.data(), phi.data() + N);
}

double ghz_fidelity(const std::vector<std::pair<double, cplx>>& overlaps, int n) {
    if (static_cast<int>(overlaps.size()) != n + 1)
        throw std::invalid_argument("ghz_fidelity: need overlaps for all n+1 values of m");
    // binomial weights C(n, n/2 - m) / 2^n by Pascal recurrence
    std::vector<double> w(n + 1);
    w[0] = std::ldexp(1.0, -n);
    for (int j = 1; j <= n; ++j) w[j] = w[j - 1] * (n - j + 1) / j;
    cplx z{0.0, 0.0};
    for (const auto& [m, ov] : overlaps) {
        const int j = static_cast<int>(std::lround(n / 2.0 - m));
        if (j < 0 || j > n) throw std::invalid_argument("ghz_fidelity: m out of range");
        z += w[j] * std::polar(1.0, pi * m * m / 2.0) * ov;
    }
    return std::norm(z);
}

double phonon_excitation(const SimulationResult& result, int n) {
    std::vector<double> w(n + 1);
    w[0] = std::ldexp(1.0, -n);
    for (int j = 1; j <= n; ++j) w[j] = w[j - 1] * (n - j + 1) / j;
    double stay = 0.0;
    for (const auto& b : result.blocks) {
        const int j = static_cast<int>(std::lround(n / 2.0 - b.m));
        stay += w[j] * std::norm(b.overlap);
    }
    return 1.0 - stay;
}

namespace {

struct AllBlocks {
    std::vector<double> ms;       // computed m values, ascending
    std::vector<BlockRun> runs;
};

// Evolves the blocks at one (cutoff scale, steps) setting. With the symmetry
// option only m >= 0 is computed (H_{-m} is gauge equivalent to H_m, see
// assemble); otherwise every block runs directly.
AllBlocks run_blocks(const SimulationConfig& cfg, double alpha_max, double cutoff_scale,
                     int steps, bool exact) {
    AllBlocks out;
    const int n = cfg.n;
    const int twom_first = cfg.solver.use_block_symmetry ? n % 2 : -n;
    for (int twom = twom_first; twom <= n; twom += 2) out.ms.push_back(twom / 2.0);
    out.runs.resize(out.ms.size());

    parallel_for(
        out.ms.size(),
        [&](std::size_t i) {
            const double m = out.ms[i];
            BlockRun r;
            int cutoff = cfg.cutoff > 0
                             ? cfg.cutoff
                             : static_cast<int>(std::ceil(suggest_cutoff(alpha_max, m) *
                                                          cutoff_scale));
            cutoff = std::max(cutoff, 16);
            if (m == 0.0) {
                r.cutoff = cutoff;
                out.runs[i] = r;
                return;
            }
            for (int attempt = 0;; ++attempt) {
                BlockHamiltonian block = build_block(m, cfg.pulse, cfg.eta, cutoff);
                double peak_tail = 0.0;
                const std::vector<cplx> psi = exact ? evolve_block_exact(block, &peak_tail)
                                                    : evolve_block(block, steps, &peak_tail);
                r.cutoff = cutoff;
                r.overlap = psi[0];
                r.norm_error = std::abs(vec_norm(psi) - 1.0);
                r.leakage = peak_tail;
                // a fixed user cutoff is honored; leakage stays visible in
                // the diagnostics instead
                if (r.leakage <= cfg.solver.leakage_tol || cfg.cutoff > 0 || attempt >= 2)
                    break;
                cutoff *= 2;
            }
            out.runs[i] = r;
        },
        cfg.solver.workers);
    return out;
}

// Mirrors m >= 0 outcomes onto negative m (the blocks are gauge equivalent:
// H_{-m} = G H_m G^dag with G = (-1)^{n_hat}, which fixes the vacuum) and
// assembles fidelity + phonon probability.
SimulationResult assemble(const SimulationConfig& cfg, const AllBlocks& ab) {
    SimulationResult res;
    std::vector<std::pair<double, cplx>> overlaps;
    for (int twom = -cfg.n; twom <= cfg.n; twom += 2) {
        const double m = twom / 2.0;
        auto it = std::find(ab.ms.begin(), ab.ms.end(), m);
        if (it == ab.ms.end()) it = std::find(ab.ms.begin(), ab.ms.end(), std::abs(m));
        const BlockRun& r = ab.runs[static_cast<std::size_t>(it - ab.ms.begin())];
        overlaps.push_back({m, r.overlap});
        BlockOutcome b;
        b.m = m;
        b.cutoff = r.cutoff;
        b.overlap = r.overlap;
        b.norm_error = r.norm_error;
        b.leakage = r.leakage;
        res.blocks.push_back(b);
        res.diagnostics.max_norm_error = std::max(res.diagnostics.max_norm_error, r.norm_error);
        res.diagnostics.max_leakage = std::max(res.diagnostics.max_leakage, r.leakage);
    }
    res.fidelity = ghz_fidelity(overlaps, cfg.n);
    res.infidelity = 1.0 - res.fidelity;
    res.phonon_prob = phonon_excitation(res, cfg.n);
    return res;
}

AllBlocks richardson(const AllBlocks& coarse, const AllBlocks& fine) {
    AllBlocks r = fine;
    for (std::size_t i = 0; i < r.runs.size(); ++i)
        r.runs[i].overlap = (4.0 * fine.runs[i].overlap - coarse.runs[i].overlap) / 3.0;
    return r;
}

} // namespace

SimulationResult simulate(const SimulationConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("simulate: n must be >= 2");
    if (cfg.solver.time_steps < 256)
        throw std::invalid_argument("simulate: time_steps must be >= 256");

    const PhaseTrajectory traj = integrate_trajectory(cfg.pulse, cfg.eta, 1024);
    const double alpha_max = traj.max_abs();
    const bool exact = piecewise_constant_family(cfg.pulse.family);

    // Fock-cutoff check: double the auto cutoff until the fidelity stops
    // moving. Runs at coarse steps; truncation error is step-insensitive.
    double cutoff_scale = 1.0;
    SimulationDiagnostics diag;
    if (cfg.solver.verify_cutoff && cfg.cutoff == 0) {
        const int coarse_steps = std::max(256, cfg.solver.time_steps / 8);
        double f_prev = assemble(cfg, run_blocks(cfg, alpha_max, 1.0, coarse_steps, exact)).fidelity;
        for (int iter = 0; iter < 2; ++iter) {
            const double f_next =
                assemble(cfg, run_blocks(cfg, alpha_max, 2.0 * cutoff_scale, coarse_steps, exact))
                    .fidelity;
            diag.cutoff_delta = std::abs(f_next - f_prev);
            if (diag.cutoff_delta <= cfg.solver.cutoff_tol) break;
            cutoff_scale *= 2.0;
            f_prev = f_next;
        }
    }

    if (exact) {
        AllBlocks ab = run_blocks(cfg, alpha_max, cutoff_scale, 0, true);
        SimulationResult res = assemble(cfg, ab);
        res.diagnostics.exact_path = true;
        res.diagnostics.cutoff_delta = diag.cutoff_delta;
        res.diagnostics.converged = true;
        return res;
    }

    // step ladder with Richardson extrapolation across doublings
    int steps = cfg.solver.time_steps;
    AllBlocks prev = run_blocks(cfg, alpha_max, cutoff_scale, steps / 2, false);
    AllBlocks cur = run_blocks(cfg, alpha_max, cutoff_scale, steps, false);
    AllBlocks extrap = richardson(prev, cur);
    double f_extrap = assemble(cfg, extrap).fidelity;
    const double f_fine = assemble(cfg, cur).fidelity;
    bool converged = std::abs(f_extrap - f_fine) <= cfg.solver.step_tol / 10.0;
    int rungs = 1;
    double delta = std::abs(f_extrap - f_fine);

    while (!converged && rungs <= cfg.solver.max_step_doublings) {
        steps *= 2;
        AllBlocks next = run_blocks(cfg, alpha_max, cutoff_scale, steps, false);
        AllBlocks next_extrap = richardson(cur, next);
        const double f_next = assemble(cfg, next_extrap).fidelity;
        delta = std::abs(f_next - f_extrap);
        prev = std::move(cur);
        cur = std::move(next);
        extrap = std::move(next_extrap);
        f_extrap = f_next;
        ++rungs;
        if (delta <= cfg.solver.step_tol) converged = true;
    }

    SimulationResult res = assemble(cfg, extrap);
    res.diagnostics.steps_used = steps;
    res.diagnostics.ladder_rungs = rungs;
    res.diagnostics.richardson_delta = delta;
    res.diagnostics.cutoff_delta = diag.cutoff_delta;
    res.diagnostics.converged = converged;
    if (!converged) {
        std::ostringstream msg;
        msg << "step ladder exhausted at " << steps << " steps, |dF| = " << delta;
        res.diagnostics.message = msg.str();
        if (cfg.solver.throw_on_budget) throw ConvergenceError(msg.str());
    }
    return res;
}

} // namespace ghz

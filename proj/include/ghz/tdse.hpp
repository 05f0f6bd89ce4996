#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ghz/ladder.hpp"
#include "ghz/pulse.hpp"

namespace ghz {

class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    int time_steps = 4096;        // base step count for the first ladder rung
    double step_tol = 1e-8;       // |Delta F| between successive Richardson values
    double cutoff_tol = 1e-9;     // |Delta F| under cutoff doubling
    int max_step_doublings = 4;
    double leakage_tol = 1e-8;    // population allowed in the top 5% Fock levels
    bool use_block_symmetry = true;  // fill m < 0 from m > 0 (gauge-equivalent blocks)
    bool verify_cutoff = true;    // run the cutoff-doubling check before the step ladder
    bool throw_on_budget = true;  // scans set false and record per-point failures
    int workers = 0;              // 0 = auto
};

struct SimulationConfig {
    int n = 2;          // ion count
    double eta = 0.03;
    Pulse pulse;
    int cutoff = 0;     // Fock dimension; 0 = auto per block
    SolverOptions solver;
};

struct BlockOutcome {
    double m = 0.0;
    int cutoff = 0;
    cplx overlap;        // <0|psi_m>
    double norm_error = 0.0;
    double leakage = 0.0;
};

struct SimulationDiagnostics {
    int steps_used = 0;        // finest rung
    int ladder_rungs = 0;
    bool converged = true;
    bool exact_path = false;   // piecewise-constant rotating-frame solve
    double richardson_delta = 0.0;  // last |Delta F| between rungs
    double cutoff_delta = 0.0;
    double max_norm_error = 0.0;
    double max_leakage = 0.0;
    std::string message;
};

struct SimulationResult {
    double fidelity = 0.0;
    double infidelity = 0.0;
    double phonon_prob = 0.0;
    std::vector<BlockOutcome> blocks;  // all m, ascending
    SimulationDiagnostics diagnostics;
};

// Unitary evolution of one block from the phonon vacuum over [0, t_gate]:
// per-step exact exponentials of the midpoint Hamiltonian (Hermitian Lanczos
// on the tridiagonal action). Steps align with the envelope pieces.
// peak_tail, when given, receives the largest population seen in the top 5%
// Fock levels over the whole evolution (the cutoff-adequacy diagnostic).
std::vector<cplx> evolve_block(const BlockHamiltonian& block, int time_steps,
                               double* peak_tail = nullptr);

// Exact solve for piecewise-constant envelopes: within each piece the
// rotating frame at the detuning makes H constant; one tridiagonal
// eigendecomposition per piece. Valid for rectangular-family pulses.
std::vector<cplx> evolve_block_exact(const BlockHamiltonian& block,
                                     double* peak_tail = nullptr);

// GHZ fidelity from per-block vacuum overlaps (m ascending, all m):
//   F = |sum_m e^{i pi m^2/2} C(n, n/2-m) <0|psi_m>|^2 / 2^{2n}.
double ghz_fidelity(const std::vector<std::pair<double, cplx>>& overlaps, int n);

// 1 - sum_m w_m |<0|psi_m>|^2 with binomial weights w_m.
double phonon_excitation(const SimulationResult& result, int n);

// Evolves all blocks (m >= 0 computed, negatives filled by symmetry unless
// disabled), assembles fidelity and phonon probability, and repeats with
// doubled cutoff / doubled time steps until both deltas pass tolerance or
// the budget is exhausted. Richardson extrapolation across step doublings
// supplies the error control.
SimulationResult simulate(const SimulationConfig& config);

} // namespace ghz

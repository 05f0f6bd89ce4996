#pragma once

#include <vector>

#include "ghz/pulse.hpp"

namespace ghz {

// <n| A |n+1> for the modified ladder operator
//   A = (1/(i eta)) sum_n <n| e^{i eta (a + a^dag)} |n+1> |n><n+1|,
// i.e. e^{-eta^2/2} L^1_n(eta^2) / sqrt(n+1) with the generalized Laguerre
// polynomial evaluated by upward recurrence. Real; -> sqrt(n+1) as eta -> 0.
double ladder_matrix_element(int nf, double eta);

// Off-diagonal of A on a truncated Fock space: offdiag[j] = <j|A|j+1>,
// j = 0 .. cutoff-2.
struct LadderOperator {
    double eta = 0.0;
    int cutoff = 0;
    std::vector<double> offdiag;
};
LadderOperator make_ladder(double eta, int cutoff);

// One S_x eigenspace block of the all-order RWA Hamiltonian,
//   H_m(t) = eta m (Omega*(t) A e^{+i delta t} + Omega(t) A^dag e^{-i delta t}),
// a time-dependent Hermitian tridiagonal (zero diagonal) operator on the
// truncated Fock space. The full time dependence sits in the scalar
// kappa(t) = eta m Omega*(t) e^{+i delta t}: H_m(t) = kappa A + kappa* A^dag.
// H_{-m} = -H_m and H_0 = 0.
struct BlockHamiltonian {
    double m = 0.0;   // S_x eigenvalue (integer or half-integer)
    double eta = 0.0;
    int cutoff = 0;
    Pulse pulse;
    std::vector<double> offdiag;  // ladder entries

    cplx kappa(double t) const;

    // H_m(t) v, tridiagonal action.
    void apply(double t, const std::vector<cplx>& v, std::vector<cplx>& out) const;

    // Dense matrix for tests and diagnostics.
    std::vector<std::vector<cplx>> dense(double t) const;
};

BlockHamiltonian build_block(double m, const Pulse& p, double eta, int cutoff);

// Fock cutoff heuristic: coherent support of the block displacement
// d = 2 |alpha|_max |m| plus an 8-sigma margin, N >= d^2 + 8 d + 16.
int suggest_cutoff(double alpha_max, double m);

} // namespace ghz

#pragma once

#include "ghz/util.hpp"

namespace ghz {

// Analytic leading-order error model built on (theta4, g) and the exact
// spin moments.
struct PerturbativePrediction {
    double delta_theta2_opt = 0.0;  // optimal S_x^2 phase correction, rad
    double delta_omega_rel = 0.0;   // corresponding Delta Omega' / Omega_0
    double infidelity = 0.0;        // 1 - F at the optimum
    double phonon_prob = 0.0;       // |g|^2 <S_x^6>
    double sx4_contribution = 0.0;  // theta4^2 * optimal bracket
};

// P_ph = |g|^2 <S_x^6>.
double phonon_probability(cplx g, int n);

// delta_theta2_opt = -theta4 (<S6> - <S4><S2>) / (<S4> - <S2>^2) and the
// amplitude correction Delta Omega'/Omega_0 = delta_theta2/pi + eta^2/2
// (the eta^2/2 undoes the (1 - eta^2/2) drive renormalization). n >= 2.
PerturbativePrediction optimal_amplitude(int n, double theta4, double eta);

// Full quadratic model at a given delta_theta2:
//   1-F = theta4^2 (<S8>-<S4>^2) + 2 dth2 theta4 (<S6>-<S4><S2>)
//       + dth2^2 (<S4>-<S2>^2) + |g|^2 <S6>.
double perturbative_infidelity(int n, double theta4, cplx g, double delta_theta2);

// The quadratic minimized over delta_theta2 (optimal bracket plus P_ph).
PerturbativePrediction optimal_prediction(int n, double theta4, cplx g, double eta);

// (n, sx4_contribution, phonon_contribution) rows for the error-budget table.
struct ContributionRow {
    int n;
    double sx4;
    double phonon;
};
std::vector<ContributionRow> contribution_table(const std::vector<int>& ns,
                                                double theta4, cplx g);

} // namespace ghz

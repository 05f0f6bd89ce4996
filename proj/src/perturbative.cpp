#include "ghz/perturbative.hpp"

#include <stdexcept>

#include "ghz/spin_moments.hpp"

namespace ghz {

double phonon_probability(cplx g, int n) {
    return std::norm(g) * sx_moment_d(n, 6);
}

PerturbativePrediction optimal_amplitude(int n, double theta4, double eta) {
    if (n < 2) throw std::invalid_argument("optimal_amplitude: n must be >= 2");
    SpinMomentTable t(n);
    const double cov = t.cov_sx2_sx4().convert_to<double>();
    const double var2 = t.var_sx2().convert_to<double>();
    PerturbativePrediction pred;
    pred.delta_theta2_opt = -theta4 * cov / var2;
    pred.delta_omega_rel = pred.delta_theta2_opt / pi + 0.5 * eta * eta;
    return pred;
}

double perturbative_infidelity(int n, double theta4, cplx g, double delta_theta2) {
    SpinMomentTable t(n);
    const double var4 = t.var_sx4().convert_to<double>();
    const double cov = t.cov_sx2_sx4().convert_to<double>();
    const double var2 = t.var_sx2().convert_to<double>();
    return theta4 * theta4 * var4 + 2.0 * delta_theta2 * theta4 * cov +
           delta_theta2 * delta_theta2 * var2 + phonon_probability(g, n);
}

PerturbativePrediction optimal_prediction(int n, double theta4, cplx g, double eta) {
    PerturbativePrediction pred = optimal_amplitude(n, theta4, eta);
    SpinMomentTable t(n);
    pred.sx4_contribution = theta4 * theta4 * t.optimal_bracket().convert_to<double>();
    pred.phonon_prob = phonon_probability(g, n);
    pred.infidelity = pred.sx4_contribution + pred.phonon_prob;
    return pred;
}

std::vector<ContributionRow> contribution_table(const std::vector<int>& ns,
                                                double theta4, cplx g) {
    std::vector<ContributionRow> rows;
    rows.reserve(ns.size());
    for (int n : ns) {
        SpinMomentTable t(n);
        rows.push_back({n, theta4 * theta4 * t.optimal_bracket().convert_to<double>(),
                        phonon_probability(g, n)});
    }
    return rows;
}

} // namespace ghz

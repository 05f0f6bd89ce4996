#include "ghz/ion_chain.hpp"

#include <cmath>
#include <stdexcept>

namespace ghz {

double critical_anisotropy(int n) {
    if (n < 2) throw std::invalid_argument("critical_anisotropy: n must be >= 2");
    return 3.0 * n / (4.0 * std::sqrt(std::log(static_cast<double>(n))));
}

double max_axial_frequency(int n, double omega_radial) {
    if (omega_radial <= 0.0)
        throw std::invalid_argument("max_axial_frequency: omega_radial must be positive");
    return omega_radial / critical_anisotropy(n);
}

double com_lamb_dicke(double omega_recoil, double omega_axial, int n) {
    if (omega_recoil <= 0.0 || omega_axial <= 0.0 || n < 1)
        throw std::invalid_argument("com_lamb_dicke: inputs must be positive");
    return std::sqrt(omega_recoil / (omega_axial * n));
}

double com_lamb_dicke_estimate(double omega_recoil, double omega_radial, int n) {
    if (n < 2) throw std::invalid_argument("com_lamb_dicke_estimate: n must be >= 2");
    return std::sqrt(3.0 * omega_recoil / (4.0 * omega_radial)) *
           std::pow(std::log(static_cast<double>(n)), -0.25);
}

std::vector<ChainTableRow> chain_table(int n_min, int n_max,
                                       double omega_radial, double omega_recoil) {
    if (n_min < 2 || n_max < n_min) throw std::invalid_argument("chain_table: bad n range");
    std::vector<ChainTableRow> rows;
    rows.reserve(n_max - n_min + 1);
    for (int n = n_min; n <= n_max; ++n) {
        ChainTableRow r;
        r.n = n;
        r.anisotropy = critical_anisotropy(n);
        r.omega_axial_max = max_axial_frequency(n, omega_radial);
        r.eta = com_lamb_dicke(omega_recoil, r.omega_axial_max, n);
        rows.push_back(r);
    }
    return rows;
}

} // namespace ghz

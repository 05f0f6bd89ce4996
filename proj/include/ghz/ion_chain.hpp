#pragma once

#include <string>
#include <vector>

namespace ghz {

// Linear-chain utilities feeding realistic Lamb-Dicke parameters into scans.

struct ChainParams {
    int n = 2;
    double omega_radial = 0.0;  // rad/s
    double omega_axial = 0.0;   // rad/s
    double omega_recoil = 0.0;  // rad/s
    std::string species = "40Ca+";
};

// Critical radial/axial anisotropy a_n ~ 3n / (4 sqrt(ln n)) above which the
// linear configuration is stable. n >= 2.
double critical_anisotropy(int n);

// Largest axial frequency keeping the chain linear: omega_radial / a_n.
double max_axial_frequency(int n, double omega_radial);

// COM-mode Lamb-Dicke parameter eta = sqrt(omega_recoil / (omega_axial n)).
double com_lamb_dicke(double omega_recoil, double omega_axial, int n);

// eta at the stability-saturating axial frequency; depends on n only through
// (ln n)^{-1/4}:  sqrt(3 omega_recoil / (4 omega_radial)) (ln n)^{-1/4}.
double com_lamb_dicke_estimate(double omega_recoil, double omega_radial, int n);

struct ChainTableRow {
    int n;
    double anisotropy;
    double omega_axial_max;  // rad/s
    double eta;
};
std::vector<ChainTableRow> chain_table(int n_min, int n_max,
                                       double omega_radial, double omega_recoil);

} // namespace ghz

#include "ghz/ladder.hpp"

#include <cmath>
#include <stdexcept>

namespace ghz {

namespace {

// L^1_n(x) by the stable upward recurrence
//   (j+1) L^1_{j+1} = (2j+2-x) L^1_j - (j+1) L^1_{j-1}.
double laguerre1(int n, double x) {
    if (n == 0) return 1.0;
    double lm = 1.0, l = 2.0 - x;
    for (int j = 1; j < n; ++j) {
        const double next = ((2.0 * j + 2.0 - x) * l - (j + 1.0) * lm) / (j + 1.0);
        lm = l;
        l = next;
    }
    return l;
}

} // namespace

double ladder_matrix_element(int nf, double eta) {
    if (nf < 0) throw std::invalid_argument("ladder_matrix_element: nf must be >= 0");
    if (eta <= 0.0 || eta >= 1.0)
        throw std::invalid_argument("ladder_matrix_element: eta must lie in (0, 1)");
    const double x = eta * eta;
    return std::exp(-0.5 * x) * laguerre1(nf, x) / std::sqrt(nf + 1.0);
}

LadderOperator make_ladder(double eta, int cutoff) {
    if (cutoff < 2) throw std::invalid_argument("make_ladder: cutoff must be >= 2");
    LadderOperator L;
    L.eta = eta;
    L.cutoff = cutoff;
    L.offdiag.resize(cutoff - 1);
    // single recurrence pass instead of per-entry restarts
    const double x = eta * eta;
    const double pref = std::exp(-0.5 * x);
    double lm = 1.0, l = 2.0 - x;
    L.offdiag[0] = pref;
    for (int j = 1; j < cutoff - 1; ++j) {
        L.offdiag[j] = pref * l / std::sqrt(j + 1.0);
        const double next = ((2.0 * j + 2.0 - x) * l - (j + 1.0) * lm) / (j + 1.0);
        lm = l;
        l = next;
    }
    return L;
}

cplx BlockHamiltonian::kappa(double t) const {
    return eta * m * std::conj(pulse.envelope(t)) * std::polar(1.0, pulse.detuning * t);
}

void BlockHamiltonian::apply(double t, const std::vector<cplx>& v, std::vector<cplx>& out) const {
    const cplx kap = kappa(t);
    const cplx kapc = std::conj(kap);
    const std::size_t n = v.size();
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx w{0.0, 0.0};
        if (j + 1 < n) w += kap * offdiag[j] * v[j + 1];
        if (j > 0) w += kapc * offdiag[j - 1] * v[j - 1];
        out[j] = w;
    }
}

std::vector<std::vector<cplx>> BlockHamiltonian::dense(double t) const {
    std::vector<std::vector<cplx>> H(cutoff, std::vector<cplx>(cutoff, cplx{0, 0}));
    const cplx kap = kappa(t);
    for (int j = 0; j + 1 < cutoff; ++j) {
        H[j][j + 1] = kap * offdiag[j];
        H[j + 1][j] = std::conj(H[j][j + 1]);
    }
    return H;
}

BlockHamiltonian build_block(double m, const Pulse& p, double eta, int cutoff) {
    if (cutoff < 8) throw std::invalid_argument("build_block: cutoff must be >= 8");
    BlockHamiltonian b;
    b.m = m;
    b.eta = eta;
    b.cutoff = cutoff;
    b.pulse = p;
    b.offdiag = make_ladder(eta, cutoff).offdiag;
    return b;
}

int suggest_cutoff(double alpha_max, double m) {
    const double d = 2.0 * alpha_max * std::abs(m);
    const int n = static_cast<int>(std::ceil(d * d + 8.0 * d + 16.0));
    return ((n + 7) / 8) * 8;
}

} // namespace ghz

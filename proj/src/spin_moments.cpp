#include "ghz/spin_moments.hpp"

#include <stdexcept>

namespace ghz {

bigint binomial(int n, int j) {
    if (j < 0 || j > n) return 0;
    bigint r = 1;
    for (int i = 0; i < j; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

rational sx_moment(int n, int p) {
    if (n < 1) throw std::invalid_argument("sx_moment: n must be >= 1");
    if (p < 0 || p > 8) throw std::invalid_argument("sx_moment: p must lie in 0..8");
    // m = (n - 2j)/2 for j = 0..n; work with 2m to stay integer for odd n
    bigint acc = 0;
    for (int j = 0; j <= n; ++j) {
        const int twom = n - 2 * j;
        bigint term = binomial(n, j);
        for (int q = 0; q < p; ++q) term *= twom;
        acc += term;
    }
    // sum C(n,j) (2m)^p / (2^n 2^p)
    bigint denom = bigint(1) << (n + p);
    return rational(acc, denom);
}

double sx_moment_d(int n, int p) { return sx_moment(n, p).convert_to<double>(); }

SpinMomentTable::SpinMomentTable(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("SpinMomentTable: n must be >= 1");
    for (int p = 0; p <= 8; ++p) m_[p] = sx_moment(n, p);
}

const rational& SpinMomentTable::moment(int p) const {
    if (p < 0 || p > 8) throw std::invalid_argument("SpinMomentTable: p must lie in 0..8");
    return m_[p];
}

double SpinMomentTable::moment_d(int p) const { return moment(p).convert_to<double>(); }

rational SpinMomentTable::var_sx2() const { return m_[4] - m_[2] * m_[2]; }

rational SpinMomentTable::var_sx4() const { return m_[8] - m_[4] * m_[4]; }

rational SpinMomentTable::cov_sx2_sx4() const { return m_[6] - m_[4] * m_[2]; }

rational SpinMomentTable::optimal_bracket() const {
    const rational v2 = var_sx2();
    if (v2 == 0)
        throw std::domain_error("SpinMomentTable: optimal bracket undefined for n = 1");
    const rational c = cov_sx2_sx4();
    return var_sx4() - c * c / v2;
}

} // namespace ghz

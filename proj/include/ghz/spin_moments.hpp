#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ghz {

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

bigint binomial(int n, int j);

// Exact moment <S_x^p> of the collective spin in |1...1>, i.e.
// sum_m m^p C(n, n/2 - m) / 2^n over m = -n/2 ... n/2 (integer or
// half-integer steps). Odd moments vanish; <S_x^2> = n/4.
rational sx_moment(int n, int p);

double sx_moment_d(int n, int p);

// Cached exact moments p = 0..8 for one ion count, with the combinations the
// amplitude-correction and infidelity formulas need. Rational arithmetic
// throughout; conversion to double happens only at these accessors.
class SpinMomentTable {
  public:
    explicit SpinMomentTable(int n);

    int n() const { return n_; }
    const rational& moment(int p) const;
    double moment_d(int p) const;

    rational var_sx2() const;   // <S4> - <S2>^2
    rational var_sx4() const;   // <S8> - <S4>^2
    rational cov_sx2_sx4() const;  // <S6> - <S4><S2>
    // <S8> - <S4>^2 - (<S6> - <S4><S2>)^2 / (<S4> - <S2>^2);
    // equals 3 n (n-1)(n-2)(n-3) / 32 exactly.
    rational optimal_bracket() const;

  private:
    int n_;
    rational m_[9];
};

} // namespace ghz

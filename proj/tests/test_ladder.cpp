#include <doctest.h>

#include <cmath>

#include "ghz/ladder.hpp"

using namespace ghz;

TEST_CASE("ladder matrix element reference values") {
    // <0|A|1> = e^{-eta^2/2} L^1_0(eta^2) = e^{-0.005} at eta = 0.1
    CHECK(ladder_matrix_element(0, 0.1) ==
          doctest::Approx(0.99501247919268232).epsilon(1e-14));

    // explicit Laguerre polynomials at x = eta^2 = 0.3
    const double x = 0.3, eta = std::sqrt(x);
    const double pref = std::exp(-0.5 * x);
    CHECK(ladder_matrix_element(0, eta) == doctest::Approx(pref).epsilon(1e-13));
    CHECK(ladder_matrix_element(1, eta) ==
          doctest::Approx(pref * (2.0 - x) / std::sqrt(2.0)).epsilon(1e-13));
    CHECK(ladder_matrix_element(2, eta) ==
          doctest::Approx(pref * (x * x - 6.0 * x + 6.0) / 2.0 / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(ladder_matrix_element(3, eta) ==
          doctest::Approx(pref * (-x * x * x + 12.0 * x * x - 36.0 * x + 24.0) / 6.0 /
                          std::sqrt(4.0))
              .epsilon(1e-13));
}

TEST_CASE("ladder operator reduces to a as eta -> 0") {
    for (int nf : {0, 1, 5, 20})
        CHECK(std::abs(ladder_matrix_element(nf, 1e-8) - std::sqrt(nf + 1.0)) < 1e-12);
}

TEST_CASE("series expansion of the modified ladder operator") {
    // <n|A|n+1> = sqrt(n+1) (1 - eta^2 (n+1)/2) + O(eta^4), i.e. the
    // (1 - eta^2/2) a - (eta^2/2) a^dag a a truncation
    for (double eta : {0.05, 0.1, 0.2}) {
        const double e4 = eta * eta * eta * eta;
        CHECK(std::abs(ladder_matrix_element(0, eta) - (1.0 - 0.5 * eta * eta)) < 0.2 * e4);
        for (int n : {1, 2, 3}) {
            const double want = std::sqrt(n + 1.0) * (1.0 - 0.5 * eta * eta * (n + 1.0));
            const double bound = 0.5 * e4 * std::pow(n + 1.0, 2.5);
            CHECK(std::abs(ladder_matrix_element(n, eta) - want) < bound);
        }
    }
}

TEST_CASE("make_ladder matches per-element evaluation") {
    const LadderOperator L = make_ladder(0.03, 40);
    REQUIRE(L.offdiag.size() == 39);
    for (int j = 0; j < 39; ++j)
        CHECK(L.offdiag[j] == doctest::Approx(ladder_matrix_element(j, 0.03)).epsilon(1e-13));
    CHECK_THROWS_AS(make_ladder(0.03, 1), std::invalid_argument);
}

TEST_CASE("block hamiltonian structure") {
    const double eta = 0.03;
    const Pulse p = make_lemniscate(0.7274789, 0.95778915, 1.0, eta);
    const BlockHamiltonian b = build_block(1.5, p, eta, 16);

    for (double t : {0.05, 0.31, 0.72, 0.98}) {
        const auto H = b.dense(t);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                CHECK(std::abs(H[i][j] - std::conj(H[j][i])) < 1e-15);  // Hermitian
                if (std::abs(i - j) > 1) CHECK(H[i][j] == cplx{0.0, 0.0});  // tridiagonal
                if (i == j) CHECK(H[i][j] == cplx{0.0, 0.0});
            }
    }

    // H_{-m} = -H_m
    const BlockHamiltonian bm = build_block(-1.5, p, eta, 16);
    const auto H = b.dense(0.4), Hm = bm.dense(0.4);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) CHECK(std::abs(Hm[i][j] + H[i][j]) < 1e-15);

    // m = 0 block is the zero operator
    const auto H0 = build_block(0.0, p, eta, 16).dense(0.4);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) CHECK(H0[i][j] == cplx{0.0, 0.0});

    CHECK_THROWS_AS(build_block(1.0, p, eta, 4), std::invalid_argument);
}

TEST_CASE("block norm bound") {
    const double eta = 0.03;
    const Pulse p = make_rectangular(1, 1.0, eta);
    const BlockHamiltonian b = build_block(2.0, p, eta, 32);
    double max_e = 0.0;
    for (double e : b.offdiag) max_e = std::max(max_e, std::abs(e));
    const double omega0 = pi / eta;
    const double bound = eta * 2.0 * omega0 * max_e;
    for (double t : {0.1, 0.5, 0.9}) {
        const auto H = b.dense(t);
        for (int i = 0; i < 32; ++i) {
            double row = 0.0;
            for (int j = 0; j < 32; ++j) row += std::abs(H[i][j]);
            CHECK(row <= 2.0 * bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("cutoff heuristic") {
    CHECK(suggest_cutoff(0.5, 0.0) == 16);
    const int n = suggest_cutoff(0.68, 10.0);  // echoed lemniscate extreme block
    CHECK(n >= 300);
    CHECK(n <= 360);
    CHECK(suggest_cutoff(0.68, 10.0) % 8 == 0);
}

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <algorithm>
#include <sstream>

#include "ghz/pulse.hpp"
#include "ghz/trajectory.hpp"

using namespace ghz;

TEST_CASE("rectangular gate conditions") {
    const Pulse p = make_rectangular(1, 1.0, 0.03);
    CHECK(p.envelope(0.5).real() == doctest::Approx(pi / 0.03).epsilon(1e-14));
    CHECK(p.envelope(0.5).imag() == 0.0);
    CHECK(p.detuning == doctest::Approx(two_pi).epsilon(1e-14));

    const Pulse p4 = make_rectangular(4, 1.0, 0.03);
    CHECK(p4.envelope(0.1).real() == doctest::Approx(2.0 * pi / 0.03).epsilon(1e-14));
    CHECK(p4.detuning == doctest::Approx(8.0 * pi).epsilon(1e-14));

    // Omega0 scales as 1/t_gate
    const Pulse p2 = make_rectangular(1, 2.0, 0.03);
    CHECK(p2.envelope(1.0).real() ==
          doctest::Approx(0.5 * p.envelope(0.5).real()).epsilon(1e-14));
}

TEST_CASE("rectangular rejects bad arguments") {
    CHECK_THROWS_AS(make_rectangular(0, 1.0, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(make_rectangular(-2, 1.0, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(make_rectangular(1, 0.0, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(make_rectangular(1, -1.0, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(make_rectangular(1, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_rectangular(1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("envelope magnitude constant inside, zero outside") {
    const Pulse p = make_rectangular(2, 1.0, 0.04);
    const double mag = std::abs(p.envelope(0.3));
    for (double t : {1e-6, 0.25, 0.5, 0.75, 1.0 - 1e-6})
        CHECK(std::abs(p.envelope(t)) == doctest::Approx(mag).epsilon(1e-14));
    CHECK(p.envelope(-0.1) == cplx{0.0, 0.0});
    CHECK(p.envelope(1.1) == cplx{0.0, 0.0});
}

TEST_CASE("lemniscate curve values") {
    const double a = 0.7274789, A = 0.95778915, T = 1.0;
    CHECK(std::abs(lemniscate_alpha(a, A, T, 0.0)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(lemniscate_alpha(a, A, T, T) - lemniscate_alpha(a, A, T, 0.0)) < 1e-12);

    const cplx mid = lemniscate_alpha(a, A, T, T / 2);
    CHECK(mid.real() == doctest::Approx(2.0 * A).epsilon(1e-12));
    CHECK(mid.imag() == doctest::Approx(0.0).epsilon(1e-12));

    // quarter period: A (1 + i (1 - a))
    const cplx q = lemniscate_alpha(a, A, T, T / 4);
    CHECK(q.real() == doctest::Approx(A).epsilon(1e-12));
    CHECK(q.imag() == doctest::Approx(A * (1.0 - a)).epsilon(1e-12));
    CHECK(std::abs(q - cplx{0.95778915, 0.26101775}) < 1e-7);

    CHECK_THROWS_AS(lemniscate_alpha(a, A, T, -0.1), std::domain_error);
    CHECK_THROWS_AS(lemniscate_alpha(a, A, T, 1.1), std::domain_error);
}

TEST_CASE("lemniscate pulse rejects non-figure-eight shapes") {
    CHECK_THROWS_AS(make_lemniscate(0.5, 1.0, 1.0, 0.03), std::domain_error);
    CHECK_THROWS_AS(make_lemniscate(0.3, 1.0, 1.0, 0.03), std::domain_error);
    CHECK_NOTHROW(make_lemniscate(0.51, 1.0, 1.0, 0.03));
}

TEST_CASE("lemniscate envelope is the curve derivative") {
    const double a = 0.7274789, A = 0.95778915, T = 1.0, eta = 0.03;
    const Pulse p = make_lemniscate(a, A, T, eta);
    // Omega(t) = (i/eta) d(curve)/dt, cross-checked by central differences
    const double h = 1e-6;
    for (double t : {0.1, 0.33, 0.5, 0.81}) {
        const cplx fd = (lemniscate_alpha(a, A, T, t + h) - lemniscate_alpha(a, A, T, t - h)) /
                        (2.0 * h);
        const cplx want = cplx{0.0, 1.0} / eta * fd;
        CHECK(std::abs(p.envelope(t) - want) < 1e-4 * std::abs(want));
    }
    // Omega(0) = -A gamma / eta, purely real
    const cplx w0 = p.envelope(0.0);
    CHECK(w0.real() == doctest::Approx(-A * two_pi / eta).epsilon(1e-12));
    CHECK(w0.imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lemniscate trajectory round trip") {
    const double a = 0.7274789, A = 0.95778915, T = 1.0, eta = 0.03;
    const Pulse p = make_lemniscate(a, A, T, eta);
    const PhaseTrajectory tr = integrate_trajectory(p, eta);
    REQUIRE(tr.converged);
    // induced trajectory is half the design curve
    for (std::size_t i = 0; i < tr.t.size(); i += tr.t.size() / 100) {
        const cplx want = 0.5 * lemniscate_alpha(a, A, T, tr.t[i]);
        CHECK(std::abs(tr.alpha[i] - want) < 1e-8);
    }
    CHECK(tr.closure_error() < 1e-8 * tr.max_abs());
}

TEST_CASE("gerono limit has vanishing spin phase") {
    const double eta = 0.03;
    const Pulse p = make_lemniscate(1.0, 0.9, 1.0, eta);
    const PhaseTrajectory tr = integrate_trajectory(p, eta);
    CHECK(std::abs(chi_phase(tr)) < 1e-10);
}

TEST_CASE("echo of rectangular pulse") {
    const double eta = 0.03, T = 1.0;
    const Pulse p = make_rectangular(1, T, eta);
    const Pulse e = echo_transform(p);
    const double omega0 = pi / eta;

    CHECK(e.duration == T);
    CHECK(e.detuning == doctest::Approx(2.0 * p.detuning).epsilon(1e-14));
    CHECK(e.family == PulseFamily::echoed_rectangular);

    CHECK(e.envelope(0.2).real() == doctest::Approx(std::sqrt(2.0) * omega0).epsilon(1e-13));
    CHECK(e.envelope(0.7).real() == doctest::Approx(-std::sqrt(2.0) * omega0).epsilon(1e-13));

    const PhaseTrajectory tr = integrate_trajectory(e, eta);
    CHECK(tr.closure_error() < 1e-8 * std::max(1.0, tr.max_abs()));
    // alpha also closes at the midpoint: each half is a full compressed loop
    const std::size_t mid = tr.segment_breaks[1];
    CHECK(std::abs(tr.alpha[mid]) < 1e-8);
}

TEST_CASE("echo midpoint antisymmetry") {
    const double eta = 0.03, T = 1.0;
    for (const Pulse& e : {echo_transform(make_rectangular(2, T, eta)),
                           echo_transform(make_lemniscate(0.7274789, 0.95778915, T, eta))}) {
        for (int i = 1; i < 40; ++i) {
            const double s = T / 2 * i / 40.0;
            CHECK(std::abs(e.envelope(s + T / 2) + e.envelope(s)) <
                  1e-12 * std::max(1.0, std::abs(e.envelope(s))));
        }
    }
}

TEST_CASE("echoed pulse cancels g") {
    const double eta = 0.03;
    const Pulse e = echo_transform(make_lemniscate(0.8, 0.9, 1.0, eta));
    const MagnusCoefficients mc = magnus_coefficients(integrate_trajectory(e, eta));
    CHECK(std::abs(mc.g) < 1e-10);
}

TEST_CASE("trajectory closure for every gate family") {
    const double eta = 0.03;
    const DesignPoint dp = lemniscate_design_point();
    const Pulse rect = make_rectangular(1, 1.0, eta);
    const Pulse lem = make_lemniscate(dp.a0, dp.A0, 1.0, eta);
    for (const Pulse& p : {rect, echo_transform(rect), lem, echo_transform(lem)}) {
        const PhaseTrajectory tr = integrate_trajectory(p, eta);
        CHECK(tr.closure_error() <= 1e-8 * tr.max_abs());
    }
}

TEST_CASE("rescaling covariance of the rectangular family") {
    const double eta = 0.03, T = 1.0, lambda = 2.0;
    for (int k : {1, 4}) {
        const Pulse p = make_rectangular(k, T, eta);
        const Pulse q = make_rectangular(k, lambda * T, eta);
        for (double t : {0.1, 0.4, 0.9}) {
            CHECK(std::abs(q.envelope(lambda * t) * lambda - p.envelope(t)) < 1e-12);
        }
        CHECK(q.detuning == doctest::Approx(p.detuning / lambda).epsilon(1e-14));
    }
}

TEST_CASE("rescaled helper preserves the trajectory") {
    const double eta = 0.03;
    const Pulse p = make_lemniscate(0.7274789, 0.95778915, 1.0, eta);
    const Pulse q = rescaled(p, 2.0);
    CHECK(q.duration == 2.0);
    const MagnusCoefficients a = magnus_coefficients(integrate_trajectory(p, eta));
    const MagnusCoefficients b = magnus_coefficients(integrate_trajectory(q, eta));
    CHECK(a.chi == doctest::Approx(b.chi).epsilon(1e-10));
    CHECK(a.theta4 == doctest::Approx(b.theta4).epsilon(1e-9));
}

TEST_CASE("scaled keeps family and multiplies the envelope") {
    const Pulse p = make_rectangular(1, 1.0, 0.03).scaled(1.01);
    CHECK(p.family == PulseFamily::rectangular);
    CHECK(p.amp_scale == doctest::Approx(1.01));
    CHECK(p.envelope(0.5).real() == doctest::Approx(1.01 * pi / 0.03).epsilon(1e-14));
}

TEST_CASE("pulse csv export") {
    std::ostringstream os;
    write_pulse_csv(os, make_rectangular(1, 1.0, 0.03), 8);
    const std::string s = os.str();
    CHECK(s.rfind("t,re_omega,im_omega,delta\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 10);
}

TEST_CASE("family name round trip") {
    for (PulseFamily f : {PulseFamily::rectangular, PulseFamily::echoed_rectangular,
                          PulseFamily::lemniscate, PulseFamily::echoed_lemniscate,
                          PulseFamily::custom})
        CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("triangle"), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <algorithm>

#include "ghz/trajectory.hpp"

using namespace ghz;

namespace {

PhaseTrajectory circle_samples(double radius, int turns, int n, bool clockwise) {
    // synthetic closed circle through the origin-free convention used by the
    // sample-only fallback: plain circle centered at origin
    PhaseTrajectory tr;
    tr.eta = 0.03;
    for (int i = 0; i <= n; ++i) {
        const double th = two_pi * turns * i / n * (clockwise ? -1.0 : 1.0);
        tr.t.push_back(static_cast<double>(i) / n);
        tr.alpha.push_back(std::polar(radius, th));
    }
    return tr;
}

} // namespace

TEST_CASE("zero pulse gives zero trajectory") {
    const Pulse z = make_custom([](double) { return cplx{0.0, 0.0}; }, 0.0, 1.0);
    const PhaseTrajectory tr = integrate_trajectory(z, 0.03);
    for (const auto& a : tr.alpha) CHECK(std::abs(a) == 0.0);
}

TEST_CASE("rectangular trajectory is the closed-form circle") {
    const double eta = 0.03;
    const Pulse p = make_rectangular(1, 1.0, eta);
    const PhaseTrajectory tr = integrate_trajectory(p, eta);
    REQUIRE(tr.converged);
    const double r = 0.25;  // eta Omega0 / (2 delta) = 1/(4 sqrt(k))
    for (std::size_t i = 0; i < tr.t.size(); i += 97) {
        const cplx want = r * (std::polar(1.0, -p.detuning * tr.t[i]) - 1.0);
        CHECK(std::abs(tr.alpha[i] - want) < 1e-10);
    }
    CHECK(tr.closure_error() < 1e-10);
    CHECK(tr.max_abs() == doctest::Approx(2 * r).epsilon(1e-6));
}

TEST_CASE("chi of rectangular gate pulses is pi/4") {
    const double eta = 0.03;
    for (int k : {1, 2, 4, 8}) {
        const PhaseTrajectory tr = integrate_trajectory(make_rectangular(k, 1.0, eta), eta);
        CHECK(chi_phase(tr) == doctest::Approx(pi / 4).epsilon(1e-9));
    }
}

TEST_CASE("chi sign convention on synthetic circles") {
    // counterclockwise unit circle: chi = -4 pi (clockwise-positive area)
    CHECK(chi_phase(circle_samples(1.0, 1, 4096, false)) ==
          doctest::Approx(-4.0 * pi).epsilon(1e-5));
    CHECK(chi_phase(circle_samples(1.0, 1, 4096, true)) ==
          doctest::Approx(4.0 * pi).epsilon(1e-5));
}

TEST_CASE("rectangular magnus coefficients match closed forms") {
    for (double eta : {0.02, 0.03, 0.05}) {
        for (int k : {1, 2, 4, 8}) {
            const PhaseTrajectory tr = integrate_trajectory(make_rectangular(k, 1.0, eta), eta);
            const MagnusCoefficients mc = magnus_coefficients(tr);
            CHECK(mc.closed);
            CHECK(mc.chi == doctest::Approx(pi / 4).epsilon(1e-9));
            CHECK(mc.theta4 == doctest::Approx(rectangular_theta4(eta, k)).epsilon(1e-9));
            CHECK(std::abs(mc.g) == doctest::Approx(rectangular_g_mag(eta, k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("rect k=1 eta=0.03 reference values") {
    const double eta = 0.03;
    const MagnusCoefficients mc =
        magnus_coefficients(integrate_trajectory(make_rectangular(1, 1.0, eta), eta));
    CHECK(mc.theta4 == doctest::Approx(-1.0602875e-3).epsilon(1e-6));
    CHECK(std::abs(mc.g) == doctest::Approx(1.4137167e-3).epsilon(1e-6));
}

TEST_CASE("closed-trajectory cancellation identities for all gate families") {
    const double eta = 0.03;
    const DesignPoint dp = lemniscate_design_point();
    const Pulse rect = make_rectangular(1, 1.0, eta);
    const Pulse lem = make_lemniscate(dp.a0, dp.A0, 1.0, eta);
    for (const Pulse& p : {rect, echo_transform(rect), lem, echo_transform(lem)}) {
        const MagnusCoefficients mc = magnus_coefficients(integrate_trajectory(p, eta));
        CHECK(std::abs(mc.sigma) < 1e-10);
        CHECK(std::abs(mc.g2) < 1e-10);
        CHECK(mc.h == doctest::Approx(2.0 * eta * eta * mc.chi).epsilon(1e-9));
    }
}

TEST_CASE("echoed rectangular: g vanishes, theta4 halves") {
    const double eta = 0.03;
    const Pulse e = echo_transform(make_rectangular(1, 1.0, eta));
    const MagnusCoefficients mc = magnus_coefficients(integrate_trajectory(e, eta));
    CHECK(std::abs(mc.g) < 1e-10);
    CHECK(mc.theta4 == doctest::Approx(0.5 * rectangular_theta4(eta, 1)).epsilon(1e-9));
    CHECK(mc.theta4 != 0.0);
    CHECK(mc.chi == doctest::Approx(pi / 4).epsilon(1e-9));
}

TEST_CASE("lemniscate coefficients match closed forms off the design point") {
    const double eta = 0.04, a = 0.8, A = 0.9;
    const MagnusCoefficients mc =
        magnus_coefficients(integrate_trajectory(make_lemniscate(a, A, 1.0, eta), eta));
    CHECK(mc.chi == doctest::Approx(lemniscate_chi(a, A)).epsilon(1e-10));
    CHECK(mc.theta4 == doctest::Approx(lemniscate_theta4(a, A, eta)).epsilon(1e-9));
    // |g| = pi eta^2 A^3 |4 - 5a| for the half-curve trajectory
    CHECK(std::abs(mc.g) ==
          doctest::Approx(pi * eta * eta * A * A * A * std::abs(4.0 - 5.0 * a)).epsilon(1e-9));
}

TEST_CASE("design point zeroes theta4 and sets chi to pi/4") {
    const double eta = 0.03;
    const DesignPoint dp = lemniscate_design_point();
    const MagnusCoefficients mc =
        magnus_coefficients(integrate_trajectory(make_lemniscate(dp.a0, dp.A0, 1.0, eta), eta));
    CHECK(std::abs(mc.chi - pi / 4) < 1e-8);
    CHECK(std::abs(mc.theta4) < 1e-8 * eta * eta);
    // echoed version keeps both conditions and cancels g
    const MagnusCoefficients me = magnus_coefficients(
        integrate_trajectory(echo_transform(make_lemniscate(dp.a0, dp.A0, 1.0, eta)), eta));
    CHECK(std::abs(me.chi - pi / 4) < 1e-8);
    CHECK(std::abs(me.theta4) < 1e-8 * eta * eta);
    CHECK(std::abs(me.g) < 1e-10);
}

TEST_CASE("design point values") {
    const DesignPoint dp = lemniscate_design_point();
    CHECK(std::abs(dp.a0 - 0.7274789) < 1e-6);
    CHECK(std::abs(dp.A0 - 0.95778915) < 1e-6);
    CHECK(std::abs(lemniscate_theta4_cubic(0.7274789)) < 1e-5);
    CHECK(dp.A0 == doctest::Approx(1.0 / (2.0 * std::sqrt(1.0 - dp.a0))).epsilon(1e-14));
}

TEST_CASE("orientation reversal negates chi and theta4") {
    const double eta = 0.03;
    const PhaseTrajectory tr = integrate_trajectory(make_rectangular(1, 1.0, eta), eta);
    // bare-sample copies, forward and reversed, through the same fallback path
    PhaseTrajectory fwd, rev;
    fwd.eta = rev.eta = eta;
    fwd.t = tr.t;
    fwd.alpha = tr.alpha;
    rev.t = tr.t;
    rev.alpha = std::vector<cplx>(tr.alpha.rbegin(), tr.alpha.rend());
    const MagnusCoefficients a = magnus_coefficients(fwd);
    const MagnusCoefficients b = magnus_coefficients(rev);
    CHECK(b.chi == doctest::Approx(-a.chi).epsilon(1e-12));
    CHECK(b.theta4 == doctest::Approx(-a.theta4).epsilon(1e-12));
}

TEST_CASE("quadrature convergence under step doubling") {
    const double eta = 0.03;
    const Pulse p = echo_transform(make_lemniscate(0.7274789, 0.95778915, 1.0, eta));
    const MagnusCoefficients a = magnus_coefficients(integrate_trajectory(p, eta, 4096));
    const MagnusCoefficients b = magnus_coefficients(integrate_trajectory(p, eta, 8192));
    CHECK(std::abs(a.chi - b.chi) < 1e-8 * std::abs(b.chi));
    CHECK(std::abs(a.g - b.g) < 1e-8 * std::max(1e-6, std::abs(b.g)));
}

TEST_CASE("non-convergence flag on a coarse grid") {
    // gate-family envelopes are trig polynomials, alias-exact under uniform
    // Simpson at any resolution; an aperiodic chirp exposes the flag
    const double eta = 0.03;
    const Pulse chirp = make_custom(
        [](double t) { return 50.0 * std::polar(1.0, 5.3 * t * t * t + 2.0 * t); }, 7.1, 1.0);
    const PhaseTrajectory coarse = integrate_trajectory(chirp, eta, 64);
    CHECK_FALSE(coarse.converged);
    CHECK(coarse.endpoint_shift > 1e-8);
    const PhaseTrajectory fine = integrate_trajectory(chirp, eta, 8192);
    CHECK(fine.converged);
    CHECK_THROWS_AS(integrate_trajectory(make_rectangular(1, 1.0, eta), eta, 32),
                    std::invalid_argument);
}

TEST_CASE("trajectory csv export") {
    std::ostringstream os;
    PhaseTrajectory tr;
    tr.t = {0.0, 1.0};
    tr.alpha = {cplx{0, 0}, cplx{0.5, -0.25}};
    write_trajectory_csv(os, tr);
    CHECK(os.str() == "t,re_alpha,im_alpha\n0,0,0\n1,0.5,-0.25\n");
}

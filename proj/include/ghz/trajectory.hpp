#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ghz/pulse.hpp"

namespace ghz {

// Phase-space path alpha(t) of the COM mode under a drive,
//   alpha(t) = -(i eta / 2) int_0^t Omega(u) e^{-i delta u} du.
// alpha_dot carries the exact integrand values at the sample times (left
// limit at envelope discontinuities); the coefficient quadratures run on the
// interval-midpoint arrays for spectral accuracy on closed loops.
struct PhaseTrajectory {
    std::vector<double> t;
    std::vector<cplx> alpha;
    std::vector<cplx> alpha_dot;
    std::vector<std::size_t> segment_breaks;  // sample indices of envelope pieces, incl. 0 and last
    // interval-midpoint values; the coefficient quadratures run on these so
    // envelope jumps at segment boundaries never enter a sum
    std::vector<cplx> mid_alpha;
    std::vector<cplx> mid_alpha_dot;
    double eta = 0.0;
    double delta = 0.0;
    bool converged = true;      // endpoint stable under step doubling
    double endpoint_shift = 0.0;

    double max_abs() const;
    double closure_error() const;  // |alpha(t_gate)|
};

// Cumulative 4th-order quadrature of the alpha integral on a uniform grid
// aligned with the envelope pieces. Integrates at n_steps and 2*n_steps;
// returns the finer result and flags non-convergence if the endpoint moved
// by more than 1e-8 (scaled by max |alpha|).
PhaseTrajectory integrate_trajectory(const Pulse& p, double eta, int n_steps = 4096);

// Spin-spin coupling phase chi = -i \oint (alpha dalpha* - alpha* dalpha);
// equals 4x the oriented enclosed area (clockwise positive, so rectangular
// gate pulses give +pi/4).
double chi_phase(const PhaseTrajectory& traj);

// Leading-order Magnus coefficients of the out-of-Lamb-Dicke error operator,
// all as line integrals over the phase trajectory:
//   theta4 = 8 i eta^2 oint |alpha|^2 (alpha dalpha* - alpha* dalpha)   [S_x^4]
//   g      = 4 eta^2   oint (alpha^2 dalpha* - 2 |alpha|^2 dalpha)      [a^dag S_x^3]
//   sigma  = i eta^2   oint dalpha*                                     [a^dag a^2 S_x]
//   h      = -2 i eta^2 oint (alpha dalpha* - alpha* dalpha) = 2 eta^2 chi
//   g2     = 2 i eta^2 oint alpha* dalpha*                              [(a^dag)^2 S_x^2]
// sigma and g2 vanish for closed trajectories.
struct MagnusCoefficients {
    double chi = 0.0;
    double theta4 = 0.0;
    cplx g;
    cplx sigma;
    double h = 0.0;
    cplx g2;
    bool closed = true;  // closure tolerance met; theta4/g are only meaningful when true
};

MagnusCoefficients magnus_coefficients(const PhaseTrajectory& traj);

// Closed forms for the rectangular family under gate conditions.
double rectangular_theta4(double eta, int k);  // -3 pi eta^2 / (8 k)
double rectangular_g_mag(double eta, int k);   //  pi eta^2 / (2 sqrt(k))

// Closed forms for the lemniscate family (trajectory = half design curve).
double lemniscate_chi(double a, double A);                  // pi A^2 (1 - a)
double lemniscate_theta4(double a, double A, double eta);   // -pi eta^2 A^4 (6 - 10a + 3.5a^2 - 1.5a^3)

// Shape polynomial whose root in (1/2, 1) zeroes theta4.
double lemniscate_theta4_cubic(double a);  // 6 - 10a + 3.5a^2 - 1.5a^3

// Design parameters solving chi = pi/4, theta4 = 0:
// a0 = 0.7274789, A0 = 1/(2 sqrt(1 - a0)) = 0.95778915.
struct DesignPoint {
    double a0 = 0.0;
    double A0 = 0.0;
};
DesignPoint lemniscate_design_point();

// CSV export: header "t,re_alpha,im_alpha".
void write_trajectory_csv(std::ostream& os, const PhaseTrajectory& traj);

} // namespace ghz

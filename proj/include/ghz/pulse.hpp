#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ghz/util.hpp"

namespace ghz {

enum class PulseFamily {
    rectangular,
    echoed_rectangular,
    lemniscate,
    echoed_lemniscate,
    custom,
};

std::string family_name(PulseFamily f);
PulseFamily family_from_name(const std::string& name);

// One smooth piece of the drive envelope, defined on [t0, t1]. Keeping the
// pieces explicit lets quadrature and time stepping align with the envelope
// discontinuities instead of smearing across them.
struct PulseSegment {
    double t0 = 0.0;
    double t1 = 0.0;
    std::function<cplx(double)> env;
};

// A bichromatic drive pulse: complex Rabi envelope Omega(t) in rad/s on
// [0, duration], zero outside, with symmetric detuning delta from the
// sideband. Immutable value after construction; safe to share across threads.
struct Pulse {
    std::vector<PulseSegment> segments;
    double detuning = 0.0;  // delta, rad/s
    double duration = 0.0;  // t_gate, s
    PulseFamily family = PulseFamily::custom;
    int k = 0;                   // rectangular families: number of circles
    double a = 0.0, A = 0.0;     // lemniscate families: shape parameters
    double amp_scale = 1.0;      // scaling applied on top of the family amplitude

    // Omega(t); zero outside [0, duration]. Segment boundaries evaluate on
    // the right-hand segment (left-closed pieces), except t == duration.
    cplx envelope(double t) const;

    // Same pulse with the envelope multiplied by factor (family tag kept,
    // so e.g. a scaled rectangular pulse still takes the piecewise-constant
    // solver path).
    Pulse scaled(double factor) const;
};

// Constant-amplitude gate pulse: Omega0 = pi sqrt(k) / (eta t_gate),
// delta = 2 pi k / t_gate, tracing k phase-space circles of radius 1/(4 sqrt(k)).
Pulse make_rectangular(int k, double t_gate, double eta);

// Figure-eight design curve at time t:
//   Re = A (1 - cos g t),  Im = A sin(g t) (1 - a + a cos g t),  g = 2 pi / t_gate.
// Figure-eight for a > 1/2; Lemniscate of Gerono at a = 1. The curve
// parametrizes the doubled phonon displacement 2*alpha(t); the physical
// trajectory driven by make_lemniscate is half this curve.
cplx lemniscate_alpha(double a, double A, double t_gate, double t);

// Amplitude- and phase-modulated pulse at delta = 0 whose induced trajectory
// is lemniscate_alpha(a, A, t)/2, i.e. Omega = (2i/eta) d(alpha)/dt.
// Requires a > 1/2 (figure-eight regime).
Pulse make_lemniscate(double a, double A, double t_gate, double eta);

// Echo: time-compressed sqrt(2)-scaled copy on [0, T/2], negated copy on
// [T/2, T], detuning doubled. Cancels the leading phonon-creation amplitude g
// while preserving chi; theta4 is halved.
Pulse echo_transform(const Pulse& p);

Pulse make_custom(std::function<cplx(double)> env, double detuning, double t_gate);

// Rescaled pulse t -> lambda t, delta -> delta/lambda, Omega -> Omega(t/lambda)/lambda.
// Leaves the phase trajectory and all gate figures of merit invariant.
Pulse rescaled(const Pulse& p, double lambda);

// CSV export: header "t,re_omega,im_omega,delta", n_samples uniform rows.
void write_pulse_csv(std::ostream& os, const Pulse& p, int n_samples = 4096);

} // namespace ghz

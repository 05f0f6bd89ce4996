#include "ghz/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ghz {

namespace {

// Cumulative 4th-order integration of d alpha/dt = -(i eta/2) Omega(t) e^{-i delta t},
// segment by segment. Each published interval is one Simpson cell; the value at
// the cell midpoint comes from the (5, 8, -1)/12 half-cell rule.
PhaseTrajectory integrate_once(const Pulse& p, double eta, int n_steps) {
    PhaseTrajectory tr;
    tr.eta = eta;
    tr.delta = p.detuning;

    const double T = p.duration;
    const cplx pref = cplx{0.0, -0.5 * eta};

    tr.t.push_back(0.0);
    tr.alpha.push_back({0.0, 0.0});
    tr.segment_breaks.push_back(0);

    cplx alpha{0.0, 0.0};
    for (const auto& seg : p.segments) {
        const double len = seg.t1 - seg.t0;
        const int steps = std::max(8, static_cast<int>(std::lround(n_steps * len / T)));
        const double h = len / steps;
        auto f = [&](double t) {
            return pref * seg.env(t) * std::polar(1.0, -p.detuning * t);
        };
        cplx f0 = f(seg.t0);
        if (tr.alpha_dot.empty()) tr.alpha_dot.push_back(f0);
        for (int i = 0; i < steps; ++i) {
            const double t0 = seg.t0 + h * i;
            const cplx fm = f(t0 + 0.5 * h);
            const cplx f1 = f(t0 + h);
            tr.mid_alpha.push_back(alpha + (h / 24.0) * (5.0 * f0 + 8.0 * fm - f1));
            tr.mid_alpha_dot.push_back(fm);
            alpha += (h / 6.0) * (f0 + 4.0 * fm + f1);
            tr.t.push_back(t0 + h);
            tr.alpha.push_back(alpha);
            // left limit at interior segment breaks
            tr.alpha_dot.push_back(f1);
            f0 = f1;
        }
        tr.segment_breaks.push_back(tr.t.size() - 1);
    }
    return tr;
}

struct LineIntegrals {
    double chi = 0.0;
    double theta4 = 0.0;
    cplx g;
    cplx sigma;
    double h_coeff = 0.0;
    cplx g2;
};

// Midpoint-rule line integrals. For the pulse families here every segment is
// a whole number of integrand periods, so the uniform midpoint sum is exact
// up to roundoff.
LineIntegrals line_integrals_mid(const PhaseTrajectory& tr) {
    LineIntegrals li;
    const double eta2 = tr.eta * tr.eta;
    double chi = 0.0, th4 = 0.0, h_acc = 0.0;
    cplx g{0, 0}, sigma{0, 0}, g2{0, 0};
    for (std::size_t i = 0; i < tr.mid_alpha.size(); ++i) {
        const double h = tr.t[i + 1] - tr.t[i];
        const cplx a = tr.mid_alpha[i];
        const cplx ad = tr.mid_alpha_dot[i];
        const cplx adc = std::conj(ad);
        const double im = std::imag(a * adc);  // Im(alpha dalpha*/dt)
        const double a2 = std::norm(a);
        chi += 2.0 * im * h;
        th4 += -16.0 * eta2 * a2 * im * h;
        g += 4.0 * eta2 * (a * a * adc - 2.0 * a2 * ad) * h;
        sigma += cplx{0.0, eta2} * adc * h;
        h_acc += 4.0 * eta2 * im * h;  // -2i eta^2 (alpha dalpha* - c.c.)
        g2 += cplx{0.0, 2.0 * eta2} * std::conj(a) * adc * h;
    }
    li.chi = chi;
    li.theta4 = th4;
    li.g = g;
    li.sigma = sigma;
    li.h_coeff = h_acc;
    li.g2 = g2;
    return li;
}

// Fallback for trajectories built from bare samples: discrete midpoint line
// integral on the polyline.
LineIntegrals line_integrals_samples(const PhaseTrajectory& tr) {
    LineIntegrals li;
    const double eta2 = tr.eta * tr.eta;
    double chi = 0.0, th4 = 0.0, h_acc = 0.0;
    cplx g{0, 0}, sigma{0, 0}, g2{0, 0};
    for (std::size_t i = 0; i + 1 < tr.alpha.size(); ++i) {
        const cplx a = 0.5 * (tr.alpha[i] + tr.alpha[i + 1]);
        const cplx da = tr.alpha[i + 1] - tr.alpha[i];
        const cplx dac = std::conj(da);
        const double im = std::imag(a * dac);
        const double a2 = std::norm(a);
        chi += 2.0 * im;
        th4 += -16.0 * eta2 * a2 * im;
        g += 4.0 * eta2 * (a * a * dac - 2.0 * a2 * da);
        sigma += cplx{0.0, eta2} * dac;
        h_acc += 4.0 * eta2 * im;
        g2 += cplx{0.0, 2.0 * eta2} * std::conj(a) * dac;
    }
    li.chi = chi;
    li.theta4 = th4;
    li.g = g;
    li.sigma = sigma;
    li.h_coeff = h_acc;
    li.g2 = g2;
    return li;
}

LineIntegrals line_integrals(const PhaseTrajectory& tr) {
    const bool has_mid = tr.mid_alpha.size() + 1 == tr.alpha.size() &&
                         tr.mid_alpha_dot.size() == tr.mid_alpha.size();
    return has_mid ? line_integrals_mid(tr) : line_integrals_samples(tr);
}

} // namespace

double PhaseTrajectory::max_abs() const {
    double m = 0.0;
    for (const auto& a : alpha) m = std::max(m, std::abs(a));
    return m;
}

double PhaseTrajectory::closure_error() const {
    return alpha.empty() ? 0.0 : std::abs(alpha.back());
}

PhaseTrajectory integrate_trajectory(const Pulse& p, double eta, int n_steps) {
    if (n_steps < 64) throw std::invalid_argument("integrate_trajectory: n_steps must be >= 64");
    if (p.segments.empty()) {
        PhaseTrajectory tr;
        tr.eta = eta;
        tr.delta = p.detuning;
        tr.t = {0.0, p.duration};
        tr.alpha = {cplx{0, 0}, cplx{0, 0}};
        return tr;
    }
    PhaseTrajectory coarse = integrate_once(p, eta, n_steps);
    PhaseTrajectory fine = integrate_once(p, eta, 2 * n_steps);
    const double shift = std::abs(fine.alpha.back() - coarse.alpha.back());
    fine.endpoint_shift = shift;
    fine.converged = shift <= 1e-8 * std::max(1.0, fine.max_abs());
    return fine;
}

double chi_phase(const PhaseTrajectory& traj) {
    if (traj.alpha.size() < 2) throw std::invalid_argument("chi_phase: need >= 2 samples");
    return line_integrals(traj).chi;
}

MagnusCoefficients magnus_coefficients(const PhaseTrajectory& traj) {
    if (traj.alpha.size() < 2)
        throw std::invalid_argument("magnus_coefficients: need >= 2 samples");
    const LineIntegrals li = line_integrals(traj);
    MagnusCoefficients mc;
    mc.chi = li.chi;
    mc.theta4 = li.theta4;
    mc.g = li.g;
    mc.sigma = li.sigma;
    mc.h = li.h_coeff;
    mc.g2 = li.g2;
    mc.closed = traj.closure_error() <= 1e-6 * std::max(1.0, traj.max_abs());
    return mc;
}

double rectangular_theta4(double eta, int k) { return -3.0 * pi * eta * eta / (8.0 * k); }

double rectangular_g_mag(double eta, int k) {
    return pi * eta * eta / (2.0 * std::sqrt(static_cast<double>(k)));
}

double lemniscate_chi(double a, double A) { return pi * A * A * (1.0 - a); }

double lemniscate_theta4_cubic(double a) {
    return 6.0 + a * (-10.0 + a * (3.5 - 1.5 * a));
}

double lemniscate_theta4(double a, double A, double eta) {
    const double A2 = A * A;
    return -pi * eta * eta * A2 * A2 * lemniscate_theta4_cubic(a);
}

DesignPoint lemniscate_design_point() {
    // root of 6 - 10a + 3.5a^2 - 1.5a^3 in (1/2, 1) by Newton with a bisection guard
    double lo = 0.5, hi = 1.0, a = 0.75;
    for (int it = 0; it < 100; ++it) {
        const double f = lemniscate_theta4_cubic(a);
        const double fp = -10.0 + 7.0 * a - 4.5 * a * a;
        (f > 0.0 ? lo : hi) = a;
        double next = a - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - a) < 1e-16) {
            a = next;
            break;
        }
        a = next;
    }
    if (!(std::abs(lemniscate_theta4_cubic(a)) < 1e-12))
        throw std::runtime_error("lemniscate_design_point: root finder failed");
    DesignPoint dp;
    dp.a0 = a;
    dp.A0 = 1.0 / (2.0 * std::sqrt(1.0 - a));
    return dp;
}

void write_trajectory_csv(std::ostream& os, const PhaseTrajectory& traj) {
    os << "t,re_alpha,im_alpha\n";
    std::ostringstream buf;
    buf.precision(17);
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        buf.str("");
        buf << traj.t[i] << ',' << traj.alpha[i].real() << ',' << traj.alpha[i].imag() << '\n';
        os << buf.str();
    }
}

} // namespace ghz

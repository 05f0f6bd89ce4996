#include "ghz/pulse.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ghz {

std::string family_name(PulseFamily f) {
    switch (f) {
        case PulseFamily::rectangular: return "rectangular";
        case PulseFamily::echoed_rectangular: return "echoed_rectangular";
        case PulseFamily::lemniscate: return "lemniscate";
        case PulseFamily::echoed_lemniscate: return "echoed_lemniscate";
        case PulseFamily::custom: return "custom";
    }
    return "custom";
}

PulseFamily family_from_name(const std::string& name) {
    if (name == "rectangular") return PulseFamily::rectangular;
    if (name == "echoed_rectangular") return PulseFamily::echoed_rectangular;
    if (name == "lemniscate") return PulseFamily::lemniscate;
    if (name == "echoed_lemniscate") return PulseFamily::echoed_lemniscate;
    if (name == "custom") return PulseFamily::custom;
    throw std::invalid_argument("unknown pulse family: " + name);
}

cplx Pulse::envelope(double t) const {
    if (t < 0.0 || t > duration) return {0.0, 0.0};
    // left-closed pieces; t == duration falls to the last piece
    for (const auto& s : segments) {
        if (t >= s.t0 && t < s.t1) return s.env(t);
    }
    return segments.empty() ? cplx{0.0, 0.0} : segments.back().env(t);
}

Pulse Pulse::scaled(double factor) const {
    Pulse q = *this;
    for (auto& s : q.segments) {
        auto inner = s.env;
        s.env = [inner, factor](double t) { return factor * inner(t); };
    }
    q.amp_scale = amp_scale * factor;
    return q;
}

Pulse make_rectangular(int k, double t_gate, double eta) {
    if (k < 1) throw std::invalid_argument("make_rectangular: k must be >= 1");
    if (t_gate <= 0.0) throw std::invalid_argument("make_rectangular: t_gate must be positive");
    if (eta <= 0.0 || eta >= 1.0)
        throw std::invalid_argument("make_rectangular: eta must lie in (0, 1)");

    const double omega0 = pi * std::sqrt(static_cast<double>(k)) / (eta * t_gate);
    Pulse p;
    p.segments = {{0.0, t_gate, [omega0](double) { return cplx{omega0, 0.0}; }}};
    p.detuning = two_pi * k / t_gate;
    p.duration = t_gate;
    p.family = PulseFamily::rectangular;
    p.k = k;
    return p;
}

cplx lemniscate_alpha(double a, double A, double t_gate, double t) {
    if (t < 0.0 || t > t_gate)
        throw std::domain_error("lemniscate_alpha: t outside [0, t_gate]");
    const double th = two_pi * t / t_gate;
    const double c = std::cos(th), s = std::sin(th);
    return {A * (1.0 - c), A * s * (1.0 - a + a * c)};
}

Pulse make_lemniscate(double a, double A, double t_gate, double eta) {
    if (a <= 0.5)
        throw std::domain_error("make_lemniscate: a must exceed 1/2 (figure-eight regime)");
    if (t_gate <= 0.0) throw std::invalid_argument("make_lemniscate: t_gate must be positive");
    if (eta <= 0.0 || eta >= 1.0)
        throw std::invalid_argument("make_lemniscate: eta must lie in (0, 1)");

    // Omega = (2i/eta) d(alpha)/dt with alpha = curve/2, i.e. (i/eta) d(curve)/dt:
    //   Omega(t) = -(A gamma / eta) [ (1-a) cos th + a cos 2th - i sin th ].
    const double gamma = two_pi / t_gate;
    const double amp = A * gamma / eta;
    Pulse p;
    p.segments = {{0.0, t_gate, [a, amp, gamma](double t) {
                       const double th = gamma * t;
                       return cplx{-amp * ((1.0 - a) * std::cos(th) + a * std::cos(2.0 * th)),
                                   amp * std::sin(th)};
                   }}};
    p.detuning = 0.0;
    p.duration = t_gate;
    p.family = PulseFamily::lemniscate;
    p.a = a;
    p.A = A;
    return p;
}

Pulse echo_transform(const Pulse& p) {
    if (!(p.duration > 0.0)) throw std::invalid_argument("echo_transform: pulse has no duration");
    const double T = p.duration;
    Pulse q;
    q.duration = T;
    q.detuning = 2.0 * p.detuning;
    const double root2 = std::sqrt(2.0);
    // first half: sqrt(2) Omega(2t); second half: -sqrt(2) Omega(2t - T)
    for (const auto& s : p.segments) {
        auto inner = s.env;
        q.segments.push_back(
            {s.t0 / 2.0, s.t1 / 2.0, [inner, root2](double t) { return root2 * inner(2.0 * t); }});
    }
    for (const auto& s : p.segments) {
        auto inner = s.env;
        q.segments.push_back({(T + s.t0) / 2.0, (T + s.t1) / 2.0,
                              [inner, root2, T](double t) { return -root2 * inner(2.0 * t - T); }});
    }
    switch (p.family) {
        case PulseFamily::rectangular: q.family = PulseFamily::echoed_rectangular; break;
        case PulseFamily::lemniscate: q.family = PulseFamily::echoed_lemniscate; break;
        default: q.family = PulseFamily::custom; break;
    }
    q.k = p.k;
    q.a = p.a;
    q.A = p.A;
    q.amp_scale = p.amp_scale;
    return q;
}

Pulse make_custom(std::function<cplx(double)> env, double detuning, double t_gate) {
    if (t_gate <= 0.0) throw std::invalid_argument("make_custom: t_gate must be positive");
    Pulse p;
    p.segments = {{0.0, t_gate, std::move(env)}};
    p.detuning = detuning;
    p.duration = t_gate;
    p.family = PulseFamily::custom;
    return p;
}

Pulse rescaled(const Pulse& p, double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("rescaled: lambda must be positive");
    Pulse q;
    q.duration = p.duration * lambda;
    q.detuning = p.detuning / lambda;
    for (const auto& s : p.segments) {
        auto inner = s.env;
        q.segments.push_back({s.t0 * lambda, s.t1 * lambda,
                              [inner, lambda](double t) { return inner(t / lambda) / lambda; }});
    }
    q.family = PulseFamily::custom;
    q.k = p.k;
    q.a = p.a;
    q.A = p.A;
    return q;
}

void write_pulse_csv(std::ostream& os, const Pulse& p, int n_samples) {
    os << "t,re_omega,im_omega,delta\n";
    std::ostringstream buf;
    buf.precision(17);
    for (int i = 0; i <= n_samples; ++i) {
        const double t = p.duration * static_cast<double>(i) / n_samples;
        const cplx w = p.envelope(t);
        buf.str("");
        buf << t << ',' << w.real() << ',' << w.imag() << ',' << p.detuning << '\n';
        os << buf.str();
    }
}

} // namespace ghz

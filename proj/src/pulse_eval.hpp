#pragma once

// Unchecked pulse formulas shared by the integrators. Callers guarantee that
// the pulse is valid and that t lies on (or within rounding of) [0, T].

#include <cmath>

#include "rap/pulse.hpp"

namespace rap::detail {

inline double gaussian_sigma(double duration_s) { return duration_s / (6.0 * std::sqrt(2.0)); }

inline double shape_at(const Pulse& p, double t) {
    if (p.envelope == EnvelopeKind::constant) return 1.0;
    const double sigma = gaussian_sigma(p.duration_s);
    const double u = t - 0.5 * p.duration_s;
    return std::exp(-(u * u) / (2.0 * sigma * sigma));
}

inline double rabi_at(const Pulse& p, double t) { return kTwoPi * p.peak_rabi_hz * shape_at(p, t); }

inline double rabi_rate_at(const Pulse& p, double t) {
    if (p.envelope == EnvelopeKind::constant) return 0.0;
    const double sigma = gaussian_sigma(p.duration_s);
    const double u = t - 0.5 * p.duration_s;
    return -rabi_at(p, t) * u / (sigma * sigma);
}

inline double detuning_at(const Pulse& p, double t) {
    return kTwoPi * (p.chirp_span_hz * (t / p.duration_s - 0.5) + p.detuning_offset_hz);
}

}  // namespace rap::detail

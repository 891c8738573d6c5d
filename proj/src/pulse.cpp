#include "rap/pulse.hpp"

#include <cmath>
#include <string>

#include "pulse_eval.hpp"
#include "rap/errors.hpp"

namespace rap {
namespace {

void require_in_pulse(const Pulse& p, double t) {
    if (!(t >= 0.0 && t <= p.duration_s)) {
        throw DomainError("time " + std::to_string(t) + " s lies outside the pulse [0, " +
                          std::to_string(p.duration_s) + "] s");
    }
}

}  // namespace

void Pulse::validate() const {
    if (!(std::isfinite(duration_s) && duration_s > 0.0)) {
        throw DomainError("pulse duration must be positive and finite");
    }
    if (!(std::isfinite(peak_rabi_hz) && peak_rabi_hz >= 0.0)) {
        throw DomainError("peak Rabi frequency must be non-negative and finite");
    }
    if (!std::isfinite(chirp_span_hz)) throw DomainError("chirp span must be finite");
    if (!std::isfinite(phase_offset_rad)) throw DomainError("phase offset must be finite");
    if (!std::isfinite(detuning_offset_hz)) throw DomainError("detuning offset must be finite");
}

double Pulse::sigma_s() const { return detail::gaussian_sigma(duration_s); }

double envelope_shape(const Pulse& pulse, double t) {
    pulse.validate();
    require_in_pulse(pulse, t);
    return detail::shape_at(pulse, t);
}

double envelope(const Pulse& pulse, double t) {
    pulse.validate();
    require_in_pulse(pulse, t);
    return detail::rabi_at(pulse, t);
}

double envelope_rate(const Pulse& pulse, double t) {
    pulse.validate();
    require_in_pulse(pulse, t);
    return detail::rabi_rate_at(pulse, t);
}

double detuning(const Pulse& pulse, double t) {
    pulse.validate();
    require_in_pulse(pulse, t);
    return detail::detuning_at(pulse, t);
}

double detuning_rate(const Pulse& pulse) {
    pulse.validate();
    return kTwoPi * pulse.chirp_span_hz / pulse.duration_s;
}

double max_drive_magnitude(const Pulse& pulse) {
    pulse.validate();
    // Envelope peaks at T/2 and |delta| peaks at the edges; the hypotenuse of
    // the two maxima bounds |Omega(t)| everywhere.
    const double max_detuning =
        kTwoPi * (0.5 * std::abs(pulse.chirp_span_hz) + std::abs(pulse.detuning_offset_hz));
    return std::hypot(kTwoPi * pulse.peak_rabi_hz, max_detuning);
}

}  // namespace rap

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rap {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class EnvelopeKind {
    gaussian_truncated,
    constant,  // flat top; used for closed-form reference cases
};

/// A single chirped, amplitude-shaped drive pulse.
///
/// Frequencies are ordinary frequencies in Hz. Everything returned by the
/// evaluation functions below is angular (rad/s). The Gaussian width is tied to
/// the duration, sigma = T / (6 sqrt 2), so the envelope at both edges is
/// exp(-9) of its peak. The edge step is kept; the Gaussian is not shifted down.
struct Pulse {
    double duration_s = 150e-6;
    double peak_rabi_hz = 512e3;
    double chirp_span_hz = 400e3;
    EnvelopeKind envelope = EnvelopeKind::gaussian_truncated;
    double phase_offset_rad = 0.0;
    double detuning_offset_hz = 0.0;  // static shift added to the chirp

    /// Throws DomainError unless the duration is positive and finite, the peak
    /// Rabi frequency is non-negative and every field is finite.
    void validate() const;

    double sigma_s() const;
};

/// Envelope normalized to its peak, in [0, 1].
double envelope_shape(const Pulse& pulse, double t);

/// Instantaneous Rabi frequency 2 pi peak_rabi * shape(t), rad/s.
double envelope(const Pulse& pulse, double t);

/// Time derivative of envelope(), rad/s^2.
double envelope_rate(const Pulse& pulse, double t);

/// Linear chirp 2 pi (chirp_span (t/T - 1/2) + detuning_offset), rad/s. With no
/// offset it starts below resonance and crosses zero at t = T/2.
double detuning(const Pulse& pulse, double t);

/// Constant slope of detuning(), rad/s^2.
double detuning_rate(const Pulse& pulse);

/// Upper bound of the drive-vector magnitude over the whole pulse, rad/s.
double max_drive_magnitude(const Pulse& pulse);

struct WaveformSample {
    double t_s = 0.0;
    double amplitude = 0.0;    // fraction of peak
    double detuning_hz = 0.0;  // delta(t) / 2 pi
    double phase_rad = 0.0;    // running integral of delta(t)
};

/// Uniform grid over [0, T] with both endpoints. The grid has
/// ceil(sample_rate * T) intervals, so the spacing is at most 1/sample_rate.
std::vector<WaveformSample> sample_waveform(const Pulse& pulse, double sample_rate_hz);

/// Rounds every amplitude to the nearest multiple of 1 / (2^bits - 1).
std::vector<WaveformSample> quantize_amplitude(std::span<const WaveformSample> samples,
                                               int bits);

}  // namespace rap

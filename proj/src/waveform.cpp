#include <cmath>
#include <cstdint>

#include "pulse_eval.hpp"
#include "rap/errors.hpp"
#include "rap/pulse.hpp"

namespace rap {

std::vector<WaveformSample> sample_waveform(const Pulse& pulse, double sample_rate_hz) {
    pulse.validate();
    if (!(std::isfinite(sample_rate_hz) && sample_rate_hz > 0.0)) {
        throw DomainError("sample rate must be positive");
    }
    const double span = sample_rate_hz * pulse.duration_s;
    if (span < 2.0) throw DomainError("sample rate times duration must be at least 2");

    // 1 MHz * 150 us evaluates to 150.00000000000003; don't let rounding add an interval.
    const auto intervals = static_cast<std::size_t>(std::ceil(span * (1.0 - 1e-12)));
    const double dt = pulse.duration_s / static_cast<double>(intervals);

    std::vector<WaveformSample> out;
    out.reserve(intervals + 1);
    double phase = 0.0;
    double prev_delta = 0.0;
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double t = (i == intervals) ? pulse.duration_s : static_cast<double>(i) * dt;
        const double delta = detail::detuning_at(pulse, t);
        if (i > 0) phase += 0.5 * (prev_delta + delta) * (t - out.back().t_s);
        out.push_back({t, detail::shape_at(pulse, t), delta / kTwoPi, phase});
        prev_delta = delta;
    }
    return out;
}

std::vector<WaveformSample> quantize_amplitude(std::span<const WaveformSample> samples,
                                               int bits) {
    if (bits < 1 || bits > 32) throw DomainError("quantization bits must lie in [1, 32]");
    const double levels = std::ldexp(1.0, bits) - 1.0;
    std::vector<WaveformSample> out(samples.begin(), samples.end());
    for (auto& s : out) s.amplitude = std::round(s.amplitude * levels) / levels;
    return out;
}

}  // namespace rap

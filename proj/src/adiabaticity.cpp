#include <algorithm>
#include <cmath>
#include <limits>

#include "pulse_eval.hpp"
#include "rap/analysis.hpp"
#include "rap/errors.hpp"

namespace rap {

double AdiabaticityProfile::peak() const {
    double best = 0.0;
    for (double m : metric) best = std::max(best, m);
    return best;
}

AdiabaticityProfile adiabaticity_profile(const Pulse& pulse, int n_samples) {
    pulse.validate();
    if (n_samples < 3) throw DomainError("adiabaticity profile needs at least 3 samples");

    const double chirp_rate = detuning_rate(pulse);
    const auto n = static_cast<std::size_t>(n_samples);
    AdiabaticityProfile profile;
    profile.times.reserve(n);
    profile.metric.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (i + 1 == n) ? pulse.duration_s
                                      : pulse.duration_s * static_cast<double>(i) /
                                            static_cast<double>(n - 1);
        // The phase offset is constant, so it drops out of both magnitudes.
        const double rabi = detail::rabi_at(pulse, t);
        const double delta = detail::detuning_at(pulse, t);
        const double omega_sq = rabi * rabi + delta * delta;
        const double rate = std::hypot(detail::rabi_rate_at(pulse, t), chirp_rate);

        double eta;
        if (omega_sq > 0.0) {
            eta = rate / omega_sq;
        } else {
            eta = rate > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
        profile.times.push_back(t);
        profile.metric.push_back(eta);
    }
    return profile;
}

double tail_population_spread(const Trajectory& trajectory, double fraction) {
    if (trajectory.size() == 0) throw DomainError("trajectory is empty");
    if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("tail fraction must lie in (0, 1]");
    const double t_end = trajectory.times.back();
    const double t_start = t_end - fraction * (t_end - trajectory.times.front());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        if (trajectory.times[i] < t_start) continue;
        lo = std::min(lo, trajectory.populations[i]);
        hi = std::max(hi, trajectory.populations[i]);
    }
    return hi - lo;
}

}  // namespace rap

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "rap/analysis.hpp"
#include "rap/errors.hpp"

namespace rap {

const char* to_string(PointStatus status) {
    switch (status) {
        case PointStatus::ok:
            return "ok";
        case PointStatus::integration_failure:
            return "integration_failure";
    }
    return "unknown";
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& job) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                }
            });
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

SweepResult run_sweep(std::string axis_name, std::span<const double> axis_values,
                      const std::function<Pulse(double)>& make_pulse,
                      const std::function<double(const Pulse&)>& efficiency,
                      const SweepOptions& options) {
    if (axis_values.empty()) throw DomainError("sweep axis '" + axis_name + "' is empty");

    // Build and validate every pulse up front so a bad axis value fails before any work.
    std::vector<Pulse> pulses;
    pulses.reserve(axis_values.size());
    for (double v : axis_values) {
        pulses.push_back(make_pulse(v));
        pulses.back().validate();
    }

    const std::size_t n = axis_values.size();
    SweepResult result;
    result.axis_name = std::move(axis_name);
    result.axis_values.assign(axis_values.begin(), axis_values.end());
    result.efficiencies.assign(n, std::numeric_limits<double>::quiet_NaN());
    result.peak_metric.assign(n, 0.0);
    result.status.assign(n, PointStatus::ok);

    parallel_for(n, options.workers, [&](std::size_t i) {
        result.peak_metric[i] = adiabaticity_profile(pulses[i], options.metric_samples).peak();
        try {
            result.efficiencies[i] = efficiency(pulses[i]);
        } catch (const IntegrationError&) {
            result.status[i] = PointStatus::integration_failure;
        }
    });
    return result;
}

namespace {

void require_non_negative(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError(std::string(what) + " values must be finite and non-negative");
        }
    }
}

}  // namespace

SweepResult sweep_chirp_span(const Pulse& base, std::span<const double> spans_hz,
                             const SweepOptions& options) {
    require_non_negative(spans_hz, "chirp span");
    return run_sweep(
        "chirp_span_hz", spans_hz,
        [&](double span) {
            Pulse p = base;
            p.chirp_span_hz = span;
            return p;
        },
        [&](const Pulse& p) { return transfer_efficiency(p, options.steps_per_rad); }, options);
}

SweepResult sweep_peak_rabi(const Pulse& base, std::span<const double> peaks_hz,
                            const SweepOptions& options) {
    require_non_negative(peaks_hz, "peak Rabi");
    return run_sweep(
        "peak_rabi_hz", peaks_hz,
        [&](double peak) {
            Pulse p = base;
            p.peak_rabi_hz = peak;
            return p;
        },
        [&](const Pulse& p) { return transfer_efficiency(p, options.steps_per_rad); }, options);
}

}  // namespace rap

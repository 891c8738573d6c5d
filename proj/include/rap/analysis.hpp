#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rap/dynamics.hpp"
#include "rap/pulse.hpp"

namespace rap {

// ---------------------------------------------------------------------------
// Adiabaticity

/// eta(t) = |dOmega/dt| / |Omega|^2 on a uniform grid. A point where the drive
/// vanishes carries +infinity.
struct AdiabaticityProfile {
    std::vector<double> times;
    std::vector<double> metric;

    double peak() const;
};

AdiabaticityProfile adiabaticity_profile(const Pulse& pulse, int n_samples);

/// Grid size used for the peak metric reported by sweeps and the CLI.
inline constexpr int kDefaultMetricSamples = 2001;

/// Sweep points whose peak eta stays below this are expected to transfer with
/// efficiency above 0.99. Empirical threshold, not a physical bound.
inline constexpr double kAdiabaticEtaThreshold = 0.1;

/// max - min of P_|1> over samples with t >= (1 - fraction) T. Residual
/// nutations after a non-adiabatic passage show up here.
double tail_population_spread(const Trajectory& trajectory, double fraction = 0.1);

// ---------------------------------------------------------------------------
// Parameter sweeps

enum class PointStatus { ok, integration_failure };

const char* to_string(PointStatus status);

struct SweepResult {
    std::string axis_name;
    std::vector<double> axis_values;
    std::vector<double> efficiencies;  // NaN where status != ok
    std::vector<double> peak_metric;
    std::vector<PointStatus> status;

    std::size_t size() const { return axis_values.size(); }
};

struct SweepOptions {
    double steps_per_rad = kDefaultStepsPerRad;
    unsigned workers = 0;  // 0 selects std::thread::hardware_concurrency()
    int metric_samples = kDefaultMetricSamples;
};

/// Evaluates `efficiency(make_pulse(value))` for every axis value. Points may
/// run concurrently; results keep input order. An IntegrationError at one point
/// is recorded in `status` and the sweep carries on.
SweepResult run_sweep(std::string axis_name, std::span<const double> axis_values,
                      const std::function<Pulse(double)>& make_pulse,
                      const std::function<double(const Pulse&)>& efficiency,
                      const SweepOptions& options = {});

SweepResult sweep_chirp_span(const Pulse& base, std::span<const double> spans_hz,
                             const SweepOptions& options = {});

SweepResult sweep_peak_rabi(const Pulse& base, std::span<const double> peaks_hz,
                            const SweepOptions& options = {});

/// Runs `count` independent jobs on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job);

// ---------------------------------------------------------------------------
// Resonant Rabi oscillations

struct RabiSample {
    double t_s = 0.0;
    double population = 0.0;
};

/// P_|1> after a flat resonant pulse of each duration.
std::vector<RabiSample> simulate_rabi_scan(double rabi_hz, std::span<const double> durations_s,
                                           double steps_per_rad = kDefaultStepsPerRad);

enum class NoiseKind { none, uniform, binomial };

struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double uniform_amplitude = 0.02;  // half-width of additive uniform noise
    int shots = 100;                  // binomial projection noise
    std::uint64_t seed = 20050101;
};

/// Applies measurement noise to simulated populations; deterministic per seed.
std::vector<RabiSample> add_noise(std::span<const RabiSample> data, const NoiseModel& noise);

/// p(t) = amplitude sin^2(pi f t + phase) + offset.
struct RabiFit {
    double fitted_rabi_hz = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double phase_rad = 0.0;
    double residual_rms = 0.0;
    int iterations = 0;
};

double rabi_model(const RabiFit& fit, double t_s);

struct FitOptions {
    int max_iterations = 200;
    double tolerance = 1e-12;  // relative parameter step that counts as converged
};

class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, RabiFit last_iterate)
        : std::runtime_error(what), last_(last_iterate) {}

    const RabiFit& last_iterate() const { return last_; }

private:
    RabiFit last_;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of the sin^2 model starting
/// from `initial_guess_hz`. Needs at least 8 points. Throws FitError on
/// non-convergence or when the amplitude collapses and leaves the frequency
/// unconstrained.
RabiFit fit_rabi(std::span<const RabiSample> data, double initial_guess_hz,
                 const FitOptions& options = {});

}  // namespace rap

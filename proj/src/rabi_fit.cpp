#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rap/analysis.hpp"
#include "rap/errors.hpp"

namespace rap {

std::vector<RabiSample> simulate_rabi_scan(double rabi_hz, std::span<const double> durations_s,
                                           double steps_per_rad) {
    if (!(rabi_hz > 0.0) || !std::isfinite(rabi_hz)) {
        throw DomainError("Rabi frequency must be positive");
    }
    std::vector<RabiSample> out;
    out.reserve(durations_s.size());
    for (double t : durations_s) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("pulse durations must be >= 0");
        if (t == 0.0) {
            out.push_back({0.0, 0.0});
            continue;
        }
        Pulse flat;
        flat.duration_s = t;
        flat.peak_rabi_hz = rabi_hz;
        flat.chirp_span_hz = 0.0;
        flat.envelope = EnvelopeKind::constant;
        out.push_back({t, transfer_efficiency(flat, steps_per_rad)});
    }
    return out;
}

std::vector<RabiSample> add_noise(std::span<const RabiSample> data, const NoiseModel& noise) {
    std::vector<RabiSample> out(data.begin(), data.end());
    std::mt19937_64 rng(noise.seed);
    switch (noise.kind) {
        case NoiseKind::none:
            break;
        case NoiseKind::uniform: {
            std::uniform_real_distribution<double> jitter(-noise.uniform_amplitude,
                                                          noise.uniform_amplitude);
            for (auto& s : out) s.population += jitter(rng);
            break;
        }
        case NoiseKind::binomial: {
            if (noise.shots < 1) throw DomainError("binomial noise needs at least one shot");
            for (auto& s : out) {
                std::binomial_distribution<int> shots(noise.shots,
                                                      std::clamp(s.population, 0.0, 1.0));
                s.population = static_cast<double>(shots(rng)) / noise.shots;
            }
            break;
        }
    }
    return out;
}

double rabi_model(const RabiFit& fit, double t_s) {
    const double s = std::sin(std::numbers::pi * fit.fitted_rabi_hz * t_s + fit.phase_rad);
    return fit.amplitude * s * s + fit.offset;
}

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Parameters: amplitude, offset, frequency / guess, phase.
struct Problem {
    std::span<const RabiSample> data;
    double f_scale;

    RabiFit unpack(const Vec4& p) const {
        RabiFit fit;
        fit.amplitude = p[0];
        fit.offset = p[1];
        fit.fitted_rabi_hz = p[2] * f_scale;
        fit.phase_rad = p[3];
        return fit;
    }

    double sse(const Vec4& p) const {
        const RabiFit fit = unpack(p);
        double acc = 0.0;
        for (const auto& s : data) {
            const double r = s.population - rabi_model(fit, s.t_s);
            acc += r * r;
        }
        return acc;
    }

    // Accumulates J^T J and J^T r without storing J.
    void normal_equations(const Vec4& p, Mat4& jtj, Vec4& jtr) const {
        jtj.setZero();
        jtr.setZero();
        const RabiFit fit = unpack(p);
        for (const auto& s : data) {
            const double x = std::numbers::pi * fit.fitted_rabi_hz * s.t_s + fit.phase_rad;
            const double sx = std::sin(x);
            const double s2x = std::sin(2.0 * x);
            const Vec4 j{sx * sx, 1.0, fit.amplitude * s2x * std::numbers::pi * f_scale * s.t_s,
                         fit.amplitude * s2x};
            const double r = s.population - (fit.amplitude * sx * sx + fit.offset);
            jtj.noalias() += j * j.transpose();
            jtr += r * j;
        }
    }
};

// Best amplitude/offset for a fixed frequency and phase over a coarse phase grid.
Vec4 initial_parameters(const Problem& prob) {
    constexpr int kPhaseGrid = 32;
    Vec4 best{0.0, 0.0, 1.0, 0.0};
    double best_sse = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kPhaseGrid; ++k) {
        const double phase = std::numbers::pi * k / kPhaseGrid;
        Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
        Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
        for (const auto& s : prob.data) {
            const double sx = std::sin(std::numbers::pi * prob.f_scale * s.t_s + phase);
            const Eigen::Vector2d row{sx * sx, 1.0};
            m.noalias() += row * row.transpose();
            rhs += s.population * row;
        }
        const Eigen::Vector2d ab = m.ldlt().solve(rhs);
        const Vec4 candidate{ab[0], ab[1], 1.0, phase};
        const double e = prob.sse(candidate);
        if (e < best_sse) {
            best_sse = e;
            best = candidate;
        }
    }
    return best;
}

// Maps the fit onto A > 0, f > 0, phase in [0, pi).
RabiFit canonical(RabiFit fit) {
    if (fit.fitted_rabi_hz < 0.0) {
        fit.fitted_rabi_hz = -fit.fitted_rabi_hz;
        fit.phase_rad = -fit.phase_rad;
    }
    if (fit.amplitude < 0.0) {
        fit.offset += fit.amplitude;
        fit.amplitude = -fit.amplitude;
        fit.phase_rad += 0.5 * std::numbers::pi;
    }
    fit.phase_rad = std::fmod(fit.phase_rad, std::numbers::pi);
    if (fit.phase_rad < 0.0) fit.phase_rad += std::numbers::pi;
    return fit;
}

}  // namespace

RabiFit fit_rabi(std::span<const RabiSample> data, double initial_guess_hz,
                 const FitOptions& options) {
    if (data.size() < 8) throw DomainError("Rabi fit needs at least 8 data points");
    if (!(initial_guess_hz > 0.0) || !std::isfinite(initial_guess_hz)) {
        throw DomainError("initial frequency guess must be positive");
    }

    const Problem prob{data, initial_guess_hz};
    Vec4 p = initial_parameters(prob);
    double sse = prob.sse(p);
    const auto n = static_cast<double>(data.size());

    auto report = [&](int iterations) {
        RabiFit fit = canonical(prob.unpack(p));
        fit.residual_rms = std::sqrt(sse / n);
        fit.iterations = iterations;
        return fit;
    };

    // Scale-aware floor for a vanishing sin^2 amplitude.
    double lo = data.front().population, hi = lo;
    for (const auto& s : data) {
        lo = std::min(lo, s.population);
        hi = std::max(hi, s.population);
    }
    const double amplitude_floor = 1e-6 * std::max(1.0, std::abs(hi) + std::abs(lo));

    double lambda = 1e-3;
    Mat4 jtj;
    Vec4 jtr;
    bool converged = false;
    int it = 0;
    for (; it < options.max_iterations && !converged; ++it) {
        if (std::abs(p[0]) < amplitude_floor) {
            throw FitError("oscillation amplitude collapsed; frequency is unconstrained",
                           report(it));
        }
        prob.normal_equations(p, jtj, jtr);

        for (;;) {
            Mat4 damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal();
            const Vec4 step = damped.ldlt().solve(jtr);
            const Vec4 trial = p + step;
            const double trial_sse = prob.sse(trial);
            if (std::isfinite(trial_sse) && trial_sse <= sse) {
                const bool small_step = step.norm() <= options.tolerance * (p.norm() + options.tolerance);
                const bool flat = (sse - trial_sse) <= 1e-15 * sse;
                p = trial;
                sse = trial_sse;
                lambda = std::max(lambda / 10.0, 1e-12);
                converged = small_step || flat;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e12) {
                // No descent direction left at working precision.
                converged = true;
                break;
            }
        }
    }

    if (!converged) throw FitError("Rabi fit did not converge", report(it));
    if (std::abs(p[0]) < amplitude_floor) {
        throw FitError("oscillation amplitude collapsed; frequency is unconstrained", report(it));
    }
    return report(it);
}

}  // namespace rap

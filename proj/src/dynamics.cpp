#include "rap/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pulse_eval.hpp"
#include "rap/errors.hpp"

namespace rap {
namespace {

constexpr std::size_t kMinSteps = 16;
constexpr double kInitialNormTolerance = 1e-9;
constexpr double kNormDriftLimit = 1e-4;

struct Vec3 {
    double x, y, z;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }

Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Vec3 torque(const Pulse& p, double t) {
    const double rabi = detail::rabi_at(p, t);
    return {rabi * std::cos(p.phase_offset_rad), rabi * std::sin(p.phase_offset_rad),
            detail::detuning_at(p, t)};
}

double time_at(const Pulse& p, std::size_t i, std::size_t steps) {
    return i == steps ? p.duration_s
                      : p.duration_s * static_cast<double>(i) / static_cast<double>(steps);
}

Vec3 rk4_step(const Pulse& p, Vec3 r, double t, double h) {
    const Vec3 w0 = torque(p, t);
    const Vec3 wm = torque(p, t + 0.5 * h);
    const Vec3 w1 = torque(p, t + h);
    const Vec3 k1 = cross(w0, r);
    const Vec3 k2 = cross(wm, r + (0.5 * h) * k1);
    const Vec3 k3 = cross(wm, r + (0.5 * h) * k2);
    const Vec3 k4 = cross(w1, r + h * k3);
    return r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

using Amps = std::array<std::complex<double>, 2>;

// -i H c for the chirped-frame two-level Hamiltonian.
Amps schrodinger_rhs(const Pulse& p, double t, const Amps& c) {
    constexpr std::complex<double> i{0.0, 1.0};
    const double half_delta = 0.5 * detail::detuning_at(p, t);
    const std::complex<double> coupling =
        0.5 * detail::rabi_at(p, t) * std::polar(1.0, -p.phase_offset_rad);
    const auto h0 = half_delta * c[0] + coupling * c[1];
    const auto h1 = std::conj(coupling) * c[0] - half_delta * c[1];
    return {-i * h0, -i * h1};
}

Amps axpy(const Amps& c, double s, const Amps& k) { return {c[0] + s * k[0], c[1] + s * k[1]}; }

Amps rk4_step(const Pulse& p, const Amps& c, double t, double h) {
    const Amps k1 = schrodinger_rhs(p, t, c);
    const Amps k2 = schrodinger_rhs(p, t + 0.5 * h, axpy(c, 0.5 * h, k1));
    const Amps k3 = schrodinger_rhs(p, t + 0.5 * h, axpy(c, 0.5 * h, k2));
    const Amps k4 = schrodinger_rhs(p, t + h, axpy(c, h, k3));
    return {c[0] + (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            c[1] + (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

void check_drift(double norm, double t) {
    if (!(std::abs(norm - 1.0) <= kNormDriftLimit)) {
        throw IntegrationError("state norm drifted to " + std::to_string(norm) + " at t=" +
                                   std::to_string(t) + " s; step too large",
                               t, norm);
    }
}

double norm3(Vec3 r) { return std::sqrt(r.x * r.x + r.y * r.y + r.z * r.z); }
double norm2(const Amps& c) { return std::sqrt(std::norm(c[0]) + std::norm(c[1])); }

void require_unit(double norm, const char* what) {
    if (!(std::abs(norm - 1.0) <= kInitialNormTolerance)) {
        throw DomainError(std::string(what) + " must have unit norm");
    }
}

void require_steps_per_rad(double steps_per_rad) {
    if (!(steps_per_rad >= kMinStepsPerRad) || !std::isfinite(steps_per_rad)) {
        throw DomainError("steps_per_rad must be finite and at least 10");
    }
}

template <typename State, typename Record>
State integrate(const Pulse& p, State s, std::size_t steps, Record&& record) {
    record(0.0, s);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = time_at(p, i, steps);
        const double t_next = time_at(p, i + 1, steps);
        s = rk4_step(p, s, t, t_next - t);
        record(t_next, s);
    }
    return s;
}

}  // namespace

double BlochState::norm() const { return std::sqrt(x * x + y * y + z * z); }

double excited_population(const BlochState& r) { return std::clamp(0.5 * (1.0 - r.z), 0.0, 1.0); }

double AmplitudeState::norm() const { return std::sqrt(std::norm(c0) + std::norm(c1)); }

BlochState to_bloch(const AmplitudeState& a) {
    const std::complex<double> coherence = a.c0 * std::conj(a.c1);
    return {2.0 * coherence.real(), -2.0 * coherence.imag(), std::norm(a.c0) - std::norm(a.c1)};
}

double DriveVector::magnitude() const {
    return std::sqrt(omega_x * omega_x + omega_y * omega_y + delta * delta);
}

DriveVector drive_at(const Pulse& pulse, double t) {
    const double rabi = envelope(pulse, t);
    return {rabi * std::cos(pulse.phase_offset_rad), rabi * std::sin(pulse.phase_offset_rad),
            detuning(pulse, t)};
}

std::size_t step_count(const Pulse& pulse, double steps_per_rad) {
    require_steps_per_rad(steps_per_rad);
    const double total_angle = max_drive_magnitude(pulse) * pulse.duration_s;
    const double steps = std::ceil(total_angle * steps_per_rad);
    return std::max(kMinSteps, static_cast<std::size_t>(steps));
}

Trajectory evolve_bloch(const Pulse& pulse, const BlochState& initial, double steps_per_rad) {
    require_unit(initial.norm(), "initial Bloch vector");
    const std::size_t steps = step_count(pulse, steps_per_rad);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.populations.reserve(steps + 1);
    integrate(pulse, Vec3{initial.x, initial.y, initial.z}, steps, [&](double t, Vec3 r) {
        check_drift(norm3(r), t);
        const BlochState b{r.x, r.y, r.z};
        traj.times.push_back(t);
        traj.states.push_back(b);
        traj.populations.push_back(excited_population(b));
    });
    return traj;
}

BlochState propagate_bloch(const Pulse& pulse, const BlochState& initial, std::size_t steps) {
    pulse.validate();
    require_unit(initial.norm(), "initial Bloch vector");
    if (steps == 0) throw DomainError("step count must be positive");
    const Vec3 r = integrate(pulse, Vec3{initial.x, initial.y, initial.z}, steps,
                             [](double t, Vec3 v) { check_drift(norm3(v), t); });
    return {r.x, r.y, r.z};
}

AmplitudeTrajectory evolve_amplitudes(const Pulse& pulse, const AmplitudeState& initial,
                                      double steps_per_rad) {
    require_unit(initial.norm(), "initial amplitudes");
    const std::size_t steps = step_count(pulse, steps_per_rad);

    AmplitudeTrajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    integrate(pulse, Amps{initial.c0, initial.c1}, steps, [&](double t, const Amps& c) {
        check_drift(norm2(c), t);
        traj.times.push_back(t);
        traj.states.push_back({c[0], c[1]});
    });
    return traj;
}

AmplitudeState propagate_amplitudes(const Pulse& pulse, const AmplitudeState& initial,
                                    std::size_t steps) {
    pulse.validate();
    require_unit(initial.norm(), "initial amplitudes");
    if (steps == 0) throw DomainError("step count must be positive");
    const Amps c = integrate(pulse, Amps{initial.c0, initial.c1}, steps,
                             [](double t, const Amps& a) { check_drift(norm2(a), t); });
    return {c[0], c[1]};
}

double transfer_efficiency(const Pulse& pulse, double steps_per_rad) {
    return excited_population(
        propagate_bloch(pulse, BlochState::ground(), step_count(pulse, steps_per_rad)));
}

}  // namespace rap

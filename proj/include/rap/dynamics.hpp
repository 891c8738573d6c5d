#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rap/pulse.hpp"

namespace rap {

/// Bloch vector. |0> sits at z = +1 and |1> at z = -1, following
/// R_z = |c0|^2 - |c1|^2.
struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double norm() const;

    static BlochState ground() { return {0.0, 0.0, 1.0}; }
    static BlochState excited() { return {0.0, 0.0, -1.0}; }
};

/// Population of |1>, (1 - z) / 2 clamped to [0, 1].
double excited_population(const BlochState& r);

struct AmplitudeState {
    std::complex<double> c0{1.0, 0.0};
    std::complex<double> c1{0.0, 0.0};

    double norm() const;
};

/// R_x = 2 Re(c0 c1*), R_y = -2 Im(c0 c1*), R_z = |c0|^2 - |c1|^2.
BlochState to_bloch(const AmplitudeState& a);

/// Instantaneous torque vector in the frame that follows the chirp.
struct DriveVector {
    double omega_x = 0.0;  // rad/s
    double omega_y = 0.0;  // rad/s
    double delta = 0.0;    // rad/s

    double magnitude() const;
};

DriveVector drive_at(const Pulse& pulse, double t);

struct Trajectory {
    std::vector<double> times;
    std::vector<BlochState> states;
    std::vector<double> populations;  // P_|1> at each time

    std::size_t size() const { return times.size(); }
    const BlochState& final_state() const { return states.back(); }
    double final_population() const { return populations.back(); }
};

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<AmplitudeState> states;
};

inline constexpr double kDefaultStepsPerRad = 100.0;
inline constexpr double kMinStepsPerRad = 10.0;

/// Number of fixed RK4 steps that keeps max|Omega| * h <= 1 / steps_per_rad.
std::size_t step_count(const Pulse& pulse, double steps_per_rad);

/// Integrates dR/dt = Omega x R over [0, T] with classical RK4 and records every
/// step, including t = 0 and t = T. Throws IntegrationError if |R| drifts from 1
/// by more than 1e-4.
Trajectory evolve_bloch(const Pulse& pulse, const BlochState& initial,
                        double steps_per_rad = kDefaultStepsPerRad);

/// Same integration without recording, over exactly `steps` equal steps.
BlochState propagate_bloch(const Pulse& pulse, const BlochState& initial, std::size_t steps);

/// Integrates i d/dt (c0, c1) = H (c0, c1) with
///   H = [[ delta/2,              Omega_R/2 e^{-i phi} ],
///        [ Omega_R/2 e^{+i phi}, -delta/2             ]]
/// on the same step grid as evolve_bloch. Independent of the Bloch integrator.
AmplitudeTrajectory evolve_amplitudes(const Pulse& pulse, const AmplitudeState& initial,
                                      double steps_per_rad = kDefaultStepsPerRad);

AmplitudeState propagate_amplitudes(const Pulse& pulse, const AmplitudeState& initial,
                                    std::size_t steps);

/// Final P_|1> after the pulse, starting from |0>.
double transfer_efficiency(const Pulse& pulse, double steps_per_rad = kDefaultStepsPerRad);

}  // namespace rap

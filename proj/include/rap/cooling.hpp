#pragma once

#include <span>
#include <variant>
#include <vector>

#include "rap/dynamics.hpp"
#include "rap/pulse.hpp"

namespace rap {

/// Populations of vibrational levels 0..n_max.
struct LadderState {
    std::vector<double> populations;
    int cycles = 0;

    int n_max() const { return static_cast<int>(populations.size()) - 1; }
    double mean_n() const;
    double total() const;
};

/// Geometric distribution nbar^n / (nbar + 1)^(n + 1), truncated at n_max and
/// renormalized.
LadderState thermal_ladder(double nbar, int n_max);

/// max(50, ceil(10 nbar)).
int default_n_max(double nbar);

enum class SidebandScaling {
    sqrt_n,          // Lamb-Dicke red sideband, |n> -> |n-1>
    sqrt_n_minus_1,  // literal alternative; leaves n = 1 dark as well as n = 0
};

struct SidebandCoupling {
    double base_rabi_hz = 512e3;
    SidebandScaling scaling = SidebandScaling::sqrt_n;

    /// Relative strength of the n -> n-1 sideband; zero for n = 0.
    double factor(int n) const;
};

/// sin^2(pi base_rabi factor(n) duration) for a flat resonant sideband pulse.
double sideband_transfer_pi(const SidebandCoupling& coupling, double pulse_duration_s, int n);

/// Final P_|1> of `rap_pulse` with its peak Rabi frequency replaced by
/// base_rabi * factor(n). Zero for dark levels.
double sideband_transfer_rap(const SidebandCoupling& coupling, const Pulse& rap_pulse, int n,
                             double steps_per_rad = kDefaultStepsPerRad);

struct PiFixed {
    double duration_s;
};

struct RapSweep {
    Pulse pulse;
};

using CoolingStrategy = std::variant<PiFixed, RapSweep>;

/// Levels n >= 1 whose per-cycle transfer falls below this count as trapped.
inline constexpr double kTrappedTransfer = 1e-3;

struct CoolingReport {
    int cycles = 0;
    std::vector<double> mean_n_history;                   // cycles + 1 entries
    std::vector<double> ground_state_population_history;  // cycles + 1 entries
    std::vector<double> transfer_per_level;               // indexed by n
    std::vector<int> trapped_levels;
    LadderState final_state;
};

struct CoolingOptions {
    double steps_per_rad = kDefaultStepsPerRad;
    unsigned workers = 0;
};

/// Per-level transfer probabilities for a strategy, indexed 0..n_max.
std::vector<double> transfer_table(const SidebandCoupling& coupling,
                                   const CoolingStrategy& strategy, int n_max,
                                   const CoolingOptions& options = {});

/// One cooling cycle with a precomputed per-level transfer table.
LadderState apply_cooling_cycle(const LadderState& state, std::span<const double> transfer);

/// Idealized pulsed sideband cooling. Each cycle moves p(n) * transfer(n) from
/// level n to n-1; decay back to the lower electronic state is instantaneous
/// and adds no heating.
CoolingReport run_cooling(const LadderState& initial, const SidebandCoupling& coupling,
                          const CoolingStrategy& strategy, int cycles,
                          const CoolingOptions& options = {});

}  // namespace rap

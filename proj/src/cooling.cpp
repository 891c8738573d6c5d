#include "rap/cooling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rap/analysis.hpp"
#include "rap/errors.hpp"

namespace rap {

double LadderState::mean_n() const {
    double acc = 0.0;
    for (std::size_t n = 0; n < populations.size(); ++n) acc += static_cast<double>(n) * populations[n];
    return acc;
}

double LadderState::total() const {
    return std::accumulate(populations.begin(), populations.end(), 0.0);
}

LadderState thermal_ladder(double nbar, int n_max) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("nbar must be >= 0");
    if (n_max < 1) throw DomainError("n_max must be >= 1");

    LadderState ladder;
    ladder.populations.resize(static_cast<std::size_t>(n_max) + 1);
    const double ratio = nbar / (nbar + 1.0);
    double weight = 1.0 / (nbar + 1.0);
    for (auto& p : ladder.populations) {
        p = weight;
        weight *= ratio;
    }
    const double norm = ladder.total();
    for (auto& p : ladder.populations) p /= norm;
    return ladder;
}

int default_n_max(double nbar) { return std::max(50, static_cast<int>(std::ceil(10.0 * nbar))); }

double SidebandCoupling::factor(int n) const {
    if (n <= 0) return 0.0;
    switch (scaling) {
        case SidebandScaling::sqrt_n:
            return std::sqrt(static_cast<double>(n));
        case SidebandScaling::sqrt_n_minus_1:
            return std::sqrt(static_cast<double>(n - 1));
    }
    return 0.0;
}

double sideband_transfer_pi(const SidebandCoupling& coupling, double pulse_duration_s, int n) {
    if (n < 0) throw DomainError("vibrational level must be >= 0");
    if (!(pulse_duration_s >= 0.0)) throw DomainError("pulse duration must be >= 0");
    const double s = std::sin(std::numbers::pi * coupling.base_rabi_hz * coupling.factor(n) *
                              pulse_duration_s);
    return s * s;
}

double sideband_transfer_rap(const SidebandCoupling& coupling, const Pulse& rap_pulse, int n,
                             double steps_per_rad) {
    if (n < 0) throw DomainError("vibrational level must be >= 0");
    const double factor = coupling.factor(n);
    if (factor == 0.0) return 0.0;
    Pulse p = rap_pulse;
    p.peak_rabi_hz = coupling.base_rabi_hz * factor;
    return transfer_efficiency(p, steps_per_rad);
}

std::vector<double> transfer_table(const SidebandCoupling& coupling,
                                   const CoolingStrategy& strategy, int n_max,
                                   const CoolingOptions& options) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    std::vector<double> table(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (const auto* pi = std::get_if<PiFixed>(&strategy)) {
        for (int n = 0; n <= n_max; ++n) table[n] = sideband_transfer_pi(coupling, pi->duration_s, n);
        return table;
    }
    const Pulse& pulse = std::get<RapSweep>(strategy).pulse;
    pulse.validate();
    parallel_for(table.size(), options.workers, [&](std::size_t n) {
        table[n] = sideband_transfer_rap(coupling, pulse, static_cast<int>(n), options.steps_per_rad);
    });
    return table;
}

LadderState apply_cooling_cycle(const LadderState& state, std::span<const double> transfer) {
    if (transfer.size() != state.populations.size()) {
        throw DomainError("transfer table does not match the ladder size");
    }
    LadderState next = state;
    // Each flow reads the pre-cycle population of its source level.
    for (std::size_t n = 1; n < next.populations.size(); ++n) {
        const double moved = state.populations[n] * transfer[n];
        next.populations[n] -= moved;
        next.populations[n - 1] += moved;
    }
    ++next.cycles;
    return next;
}

CoolingReport run_cooling(const LadderState& initial, const SidebandCoupling& coupling,
                          const CoolingStrategy& strategy, int cycles,
                          const CoolingOptions& options) {
    if (cycles < 1) throw DomainError("cooling needs at least one cycle");
    if (initial.populations.size() < 2) throw DomainError("ladder needs at least two levels");

    CoolingReport report;
    report.cycles = cycles;
    report.transfer_per_level = transfer_table(coupling, strategy, initial.n_max(), options);
    for (int n = 1; n <= initial.n_max(); ++n) {
        if (report.transfer_per_level[n] < kTrappedTransfer) report.trapped_levels.push_back(n);
    }

    LadderState state = initial;
    report.mean_n_history.reserve(static_cast<std::size_t>(cycles) + 1);
    report.ground_state_population_history.reserve(static_cast<std::size_t>(cycles) + 1);
    report.mean_n_history.push_back(state.mean_n());
    report.ground_state_population_history.push_back(state.populations[0]);

    for (int c = 0; c < cycles; ++c) {
        state = apply_cooling_cycle(state, report.transfer_per_level);
        report.mean_n_history.push_back(state.mean_n());
        report.ground_state_population_history.push_back(state.populations[0]);
    }
    report.final_state = std::move(state);
    return report;
}

}  // namespace rap

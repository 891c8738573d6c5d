#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "rap/analysis.hpp"
#include "rap/cooling.hpp"
#include "rap/dynamics.hpp"
#include "rap/pulse.hpp"

// Plot-ready exports. CSV files use ',' separators, '.' decimals and LF line
// endings. A non-empty `comment` is written first as a single '# ' line.

namespace rap::io {

/// Locale-independent, 15 significant digits.
std::string format_number(double value);

void write_waveform_csv(std::ostream& out, std::span<const WaveformSample> samples,
                        std::string_view comment = {});

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          std::string_view comment = {});

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, std::string_view comment = {});

/// Keys: fitted_rabi_hz, amplitude, offset, phase_rad, residual_rms, iterations.
std::string fit_report_json(const RabiFit& fit);

void write_cooling_csv(std::ostream& out, const CoolingReport& report,
                       std::string_view comment = {});

std::string trapped_levels_json(const CoolingReport& report);

}  // namespace rap::io

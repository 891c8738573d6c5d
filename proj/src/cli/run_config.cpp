#include <cmath>
#include <sstream>
#include <string_view>

#include "rap/cli.hpp"
#include "rap/cooling.hpp"
#include "rap/csv.hpp"
#include "rap/dynamics.hpp"
#include "rap/errors.hpp"

namespace rap::cli {
namespace {

void require(bool ok, std::string_view field, std::string_view why) {
    if (!ok) throw ConfigError(std::string("--") + std::string(field) + ": " + std::string(why));
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

double parse_number(std::string_view token) {
    std::string s(token);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    // Allow surrounding blanks only.
    while (used < s.size() && (s[used] == ' ' || s[used] == '\t')) ++used;
    if (used != s.size() || s.find_first_not_of(" \t") == std::string::npos) {
        throw ConfigError("--values: '" + s + "' is not a number");
    }
    return v;
}

}  // namespace

void RunConfig::validate() const {
    require(finite_positive(pulse.duration_s), "duration", "must be positive");
    require(finite_non_negative(pulse.peak_rabi_hz), "peak-rabi", "must be non-negative");
    require(std::isfinite(pulse.chirp_span_hz), "chirp-span", "must be finite");
    require(std::isfinite(pulse.phase_offset_rad), "phase", "must be finite");
    require(std::isfinite(pulse.detuning_offset_hz), "detuning-offset", "must be finite");
    require(std::isfinite(steps_per_rad) && steps_per_rad >= kMinStepsPerRad, "steps-per-rad",
            "must be at least 10");

    if (command == "waveform") {
        require(finite_positive(sample_rate_hz), "sample-rate", "must be positive");
        require(sample_rate_hz * pulse.duration_s >= 2.0, "sample-rate",
                "must give at least two intervals over the pulse");
        require(quantize_bits == 0 || (quantize_bits >= 1 && quantize_bits <= 32), "bits",
                "must be 0 (off) or lie in [1, 32]");
    } else if (command == "sweep") {
        require(axis == "chirp" || axis == "peak", "axis", "must be 'chirp' or 'peak'");
        if (!use_values) {
            require(finite_non_negative(range_from), "from", "must be non-negative");
            require(std::isfinite(range_to), "to", "must be finite");
            require(finite_positive(range_step), "step", "must be positive");
        }
        const auto axis_points = axis_values();
        require(!axis_points.empty(), use_values ? "values" : "to", "sweep axis is empty");
        for (double v : axis_points) {
            require(finite_non_negative(v), "values", "axis values must be non-negative");
        }
    } else if (command == "rabi") {
        require(finite_positive(rabi_hz), "rabi", "must be positive");
        require(finite_positive(guess_hz), "guess", "must be positive");
        require(points >= 8, "points", "the fit needs at least 8 points");
        require(finite_positive(t_max_s), "t-max", "must be positive");
        require(noise == "none" || noise == "uniform" || noise == "binomial", "noise",
                "must be none, uniform or binomial");
        require(shots >= 1, "shots", "must be at least 1");
        require(finite_non_negative(noise_amplitude), "noise-amplitude", "must be non-negative");
    } else if (command == "cool") {
        require(strategy == "rap" || strategy == "pi", "strategy", "must be 'rap' or 'pi'");
        require(finite_non_negative(nbar), "nbar", "must be non-negative");
        require(n_max == 0 || n_max >= 1, "n-max", "must be 0 (auto) or at least 1");
        require(cycles >= 1, "cycles", "must be at least 1");
        require(finite_non_negative(base_rabi_hz), "base-rabi", "must be non-negative");
        require(finite_non_negative(pi_duration_s), "pi-duration", "must be non-negative");
        require(pi_duration_s > 0.0 || base_rabi_hz > 0.0, "pi-duration",
                "cannot be derived from a zero base Rabi frequency");
        require(scaling == "sqrt_n" || scaling == "sqrt_n_minus_1", "scaling",
                "must be sqrt_n or sqrt_n_minus_1");
    }
}

std::vector<double> RunConfig::axis_values() const {
    std::vector<double> out;
    if (use_values) {
        std::string_view rest = values;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            out.push_back(parse_number(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return out;
    }
    if (!(range_step > 0.0) || !std::isfinite(range_from) || !std::isfinite(range_to)) return out;
    // Index-based so the last point is not lost to accumulated rounding.
    const double slack = 1e-9 * range_step;
    for (std::size_t i = 0;; ++i) {
        const double v = range_from + static_cast<double>(i) * range_step;
        if (v > range_to + slack) break;
        out.push_back(v);
    }
    return out;
}

int RunConfig::resolved_n_max() const { return n_max > 0 ? n_max : default_n_max(nbar); }

double RunConfig::resolved_pi_duration() const {
    return pi_duration_s > 0.0 ? pi_duration_s : 1.0 / (2.0 * base_rabi_hz);
}

std::string RunConfig::describe() const {
    using io::format_number;
    std::ostringstream s;
    s << "command=" << command << " duration_s=" << format_number(pulse.duration_s)
      << " peak_rabi_hz=" << format_number(pulse.peak_rabi_hz)
      << " chirp_span_hz=" << format_number(pulse.chirp_span_hz)
      << " phase_rad=" << format_number(pulse.phase_offset_rad)
      << " detuning_offset_hz=" << format_number(pulse.detuning_offset_hz)
      << " envelope=" << (pulse.envelope == EnvelopeKind::constant ? "constant" : "gaussian")
      << " steps_per_rad=" << format_number(steps_per_rad);
    if (command == "waveform") {
        s << " sample_rate_hz=" << format_number(sample_rate_hz) << " bits=" << quantize_bits;
    } else if (command == "sweep") {
        s << " axis=" << axis;
        if (use_values) {
            s << " values=" << values;
        } else {
            s << " from=" << format_number(range_from) << " to=" << format_number(range_to)
              << " step=" << format_number(range_step);
        }
    } else if (command == "rabi") {
        s << " rabi_hz=" << format_number(rabi_hz) << " guess_hz=" << format_number(guess_hz)
          << " points=" << points << " t_max_s=" << format_number(t_max_s) << " noise=" << noise
          << " shots=" << shots << " noise_amplitude=" << format_number(noise_amplitude)
          << " seed=" << seed;
    } else if (command == "cool") {
        s << " strategy=" << strategy << " nbar=" << format_number(nbar)
          << " n_max=" << resolved_n_max() << " cycles=" << cycles
          << " base_rabi_hz=" << format_number(base_rabi_hz)
          << " pi_duration_s=" << format_number(resolved_pi_duration()) << " scaling=" << scaling;
    }
    return s.str();
}

}  // namespace rap::cli

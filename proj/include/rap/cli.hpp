#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rap/pulse.hpp"

namespace rap::cli {

/// Bad or inconsistent run parameters. The message starts with the offending
/// option name.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fully resolved parameters for one CLI invocation. Values come from the
/// optional --config file and are overridden by command-line flags.
struct RunConfig {
    std::string command;

    Pulse pulse;
    double steps_per_rad = 100.0;
    unsigned workers = 0;
    std::uint64_t seed = 20050101;
    std::string out;

    // waveform
    double sample_rate_hz = 1e6;
    int quantize_bits = 0;  // 0 keeps full precision

    // sweep
    std::string axis = "chirp";
    std::string values;       // comma separated
    bool use_values = false;  // axis comes from `values` instead of the range
    double range_from = 50e3;
    double range_to = 1500e3;
    double range_step = 25e3;

    // rabi
    double rabi_hz = 512e3;
    double guess_hz = 500e3;
    int points = 60;
    double t_max_s = 10e-6;
    std::string noise = "binomial";
    int shots = 100;
    double noise_amplitude = 0.02;

    // cool
    std::string strategy = "rap";
    double nbar = 5.0;
    int n_max = 0;  // 0 selects max(50, ceil(10 nbar))
    int cycles = 40;
    double base_rabi_hz = 512e3;
    double pi_duration_s = 0.0;  // 0 selects a pi pulse for n = 1
    std::string scaling = "sqrt_n";

    /// Throws ConfigError naming the first invalid field.
    void validate() const;

    /// Sweep axis values in Hz, from `values` or the from/to/step range.
    std::vector<double> axis_values() const;

    int resolved_n_max() const;
    double resolved_pi_duration() const;

    /// Single line of key=value pairs for the command, used as file header.
    std::string describe() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // integration or fit failure
inline constexpr int kExitUsage = 2;

/// Parses `args` (without the program name) and runs the subcommand. Summary
/// lines go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rap::cli

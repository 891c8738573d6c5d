#include <algorithm>
#include <array>
#include <map>
#include <fstream>
#include <iostream>
#include <numeric>

#include "CLI11.hpp"
#include "rap/analysis.hpp"
#include "rap/cli.hpp"
#include "rap/cooling.hpp"
#include "rap/csv.hpp"
#include "rap/dynamics.hpp"
#include "rap/errors.hpp"

namespace rap::cli {
namespace {

// Opens --out, or hands back `fallback` for "-".
class OutputFile {
public:
    OutputFile(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path != "-") {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw ConfigError("--out: cannot open '" + path + "' for writing");
            stream_ = &file_;
        }
    }

    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

std::string fmt(double v) { return io::format_number(v); }

int cmd_waveform(const RunConfig& cfg, std::ostream& out) {
    auto samples = sample_waveform(cfg.pulse, cfg.sample_rate_hz);
    if (cfg.quantize_bits > 0) samples = quantize_amplitude(samples, cfg.quantize_bits);
    OutputFile file(cfg.out, out);
    io::write_waveform_csv(file.stream(), samples, cfg.describe());
    if (cfg.out != "-") out << "samples=" << samples.size() << " out=" << cfg.out << '\n';
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const Trajectory traj = evolve_bloch(cfg.pulse, BlochState::ground(), cfg.steps_per_rad);
    const double peak_eta = adiabaticity_profile(cfg.pulse, kDefaultMetricSamples).peak();
    {
        OutputFile file(cfg.out, out);
        io::write_trajectory_csv(file.stream(), traj, cfg.describe());
    }
    out << "final_p1=" << fmt(traj.final_population()) << " peak_eta=" << fmt(peak_eta)
        << " tail_spread=" << fmt(tail_population_spread(traj))
        << " adiabatic=" << (peak_eta < kAdiabaticEtaThreshold ? "yes" : "no")
        << " steps=" << traj.size() - 1 << '\n';
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const auto axis = cfg.axis_values();
    SweepOptions options;
    options.steps_per_rad = cfg.steps_per_rad;
    options.workers = cfg.workers;
    const SweepResult result = cfg.axis == "chirp" ? sweep_chirp_span(cfg.pulse, axis, options)
                                                   : sweep_peak_rabi(cfg.pulse, axis, options);
    {
        OutputFile file(cfg.out, out);
        io::write_sweep_csv(file.stream(), result, cfg.describe());
    }

    std::size_t failed = 0;
    double lo = 1.0, sum = 0.0;
    for (std::size_t i = 0; i < result.size(); ++i) {
        if (result.status[i] != PointStatus::ok) {
            ++failed;
            continue;
        }
        lo = std::min(lo, result.efficiencies[i]);
        sum += result.efficiencies[i];
    }
    const std::size_t ok = result.size() - failed;
    out << "points=" << result.size() << " failed=" << failed
        << " min_efficiency=" << (ok ? fmt(lo) : "nan")
        << " mean_efficiency=" << (ok ? fmt(sum / static_cast<double>(ok)) : "nan") << '\n';
    return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_rabi(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<double> durations(static_cast<std::size_t>(cfg.points));
    for (std::size_t i = 0; i < durations.size(); ++i) {
        durations[i] = cfg.t_max_s * static_cast<double>(i) / static_cast<double>(durations.size() - 1);
    }
    NoiseModel noise;
    noise.kind = cfg.noise == "none"      ? NoiseKind::none
                 : cfg.noise == "uniform" ? NoiseKind::uniform
                                          : NoiseKind::binomial;
    noise.shots = cfg.shots;
    noise.uniform_amplitude = cfg.noise_amplitude;
    noise.seed = cfg.seed;
    const auto data = add_noise(simulate_rabi_scan(cfg.rabi_hz, durations, cfg.steps_per_rad), noise);

    try {
        const RabiFit fit = fit_rabi(data, cfg.guess_hz);
        {
            OutputFile file(cfg.out, out);
            file.stream() << io::fit_report_json(fit) << '\n';
        }
        out << "fitted_rabi_hz=" << fmt(fit.fitted_rabi_hz)
            << " relative_error=" << fmt(std::abs(fit.fitted_rabi_hz / cfg.rabi_hz - 1.0))
            << " residual_rms=" << fmt(fit.residual_rms) << " iterations=" << fit.iterations << '\n';
        return kExitOk;
    } catch (const FitError& e) {
        err << "rabi: fit failed: " << e.what() << " (last fitted_rabi_hz="
            << fmt(e.last_iterate().fitted_rabi_hz) << ")\n";
        return kExitFailure;
    }
}

int cmd_cool(const RunConfig& cfg, std::ostream& out) {
    const LadderState ladder = thermal_ladder(cfg.nbar, cfg.resolved_n_max());
    SidebandCoupling coupling;
    coupling.base_rabi_hz = cfg.base_rabi_hz;
    coupling.scaling = cfg.scaling == "sqrt_n" ? SidebandScaling::sqrt_n : SidebandScaling::sqrt_n_minus_1;
    CoolingStrategy strategy = PiFixed{cfg.resolved_pi_duration()};
    if (cfg.strategy == "rap") strategy = RapSweep{cfg.pulse};
    CoolingOptions options;
    options.steps_per_rad = cfg.steps_per_rad;
    options.workers = cfg.workers;

    const CoolingReport report = run_cooling(ladder, coupling, strategy, cfg.cycles, options);
    const std::string trapped = io::trapped_levels_json(report);
    {
        OutputFile file(cfg.out, out);
        io::write_cooling_csv(file.stream(), report, cfg.describe());
    }
    if (cfg.out != "-") {
        std::ofstream side(cfg.out + ".trapped.json", std::ios::binary | std::ios::trunc);
        if (!side) throw ConfigError("--out: cannot write trapped-level file next to '" + cfg.out + "'");
        side << trapped << '\n';
    }
    out << "final_mean_n=" << fmt(report.mean_n_history.back())
        << " final_p_ground=" << fmt(report.ground_state_population_history.back())
        << " trapped_levels=" << trapped << '\n';
    return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg, const std::string& default_out) {
    cfg.out = default_out;
    sub->add_option("--out", cfg.out, "Output file ('-' for stdout)")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "Worker threads (0 = all processors)")
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed for the noise generator")->capture_default_str();
    sub->add_option("--steps-per-rad", cfg.steps_per_rad, "Integrator steps per radian of max |Omega|")
        ->capture_default_str();
}

void add_pulse(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--duration", cfg.pulse.duration_s, "Pulse length T in s")->capture_default_str();
    sub->add_option("--peak-rabi", cfg.pulse.peak_rabi_hz, "Peak Rabi frequency in Hz")
        ->capture_default_str();
    sub->add_option("--chirp-span", cfg.pulse.chirp_span_hz, "Detuning span swept during the pulse, Hz")
        ->capture_default_str();
    sub->add_option("--phase", cfg.pulse.phase_offset_rad, "Constant drive phase in rad")
        ->capture_default_str();
    sub->add_option("--detuning-offset", cfg.pulse.detuning_offset_hz, "Static detuning added to the chirp, Hz")
        ->capture_default_str();
    sub->add_option("--envelope", cfg.pulse.envelope, "Envelope shape")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, EnvelopeKind>{{"gaussian", EnvelopeKind::gaussian_truncated},
                                                {"constant", EnvelopeKind::constant}},
            CLI::ignore_case));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chirped-pulse adiabatic passage simulator"};
    app.set_config("--config", "", "INI/TOML file with one section per subcommand");
    app.require_subcommand(1);

    // One config per subcommand; only the selected one is used.
    std::array<RunConfig, 5> configs;

    RunConfig& sim_cfg = configs[0];
    auto* simulate = app.add_subcommand("simulate", "Bloch trajectory of one pulse");
    add_common(simulate, sim_cfg, "trajectory.csv");
    add_pulse(simulate, sim_cfg);

    RunConfig& sweep_cfg = configs[1];
    auto* sweep = app.add_subcommand("sweep", "Transfer efficiency over a parameter axis");
    add_common(sweep, sweep_cfg, "sweep.csv");
    add_pulse(sweep, sweep_cfg);
    sweep->add_option("--axis", sweep_cfg.axis, "chirp or peak")->capture_default_str();
    auto* values_opt = sweep->add_option("--values", sweep_cfg.values, "Comma-separated axis values in Hz");
    sweep->add_option("--from", sweep_cfg.range_from, "First axis value in Hz")->capture_default_str();
    sweep->add_option("--to", sweep_cfg.range_to, "Last axis value in Hz")->capture_default_str();
    sweep->add_option("--step", sweep_cfg.range_step, "Axis step in Hz")->capture_default_str();

    RunConfig& rabi_cfg = configs[2];
    auto* rabi = app.add_subcommand("rabi", "Synthesize resonant Rabi oscillations and fit them");
    add_common(rabi, rabi_cfg, "rabi_fit.json");
    rabi->add_option("--rabi", rabi_cfg.rabi_hz, "Generating Rabi frequency in Hz")->capture_default_str();
    rabi->add_option("--guess", rabi_cfg.guess_hz, "Initial fit frequency in Hz")->capture_default_str();
    rabi->add_option("--points", rabi_cfg.points, "Number of pulse durations")->capture_default_str();
    rabi->add_option("--t-max", rabi_cfg.t_max_s, "Longest pulse duration in s")->capture_default_str();
    rabi->add_option("--noise", rabi_cfg.noise, "none, uniform or binomial")->capture_default_str();
    rabi->add_option("--shots", rabi_cfg.shots, "Shots per point for binomial noise")->capture_default_str();
    rabi->add_option("--noise-amplitude", rabi_cfg.noise_amplitude, "Half-width of uniform noise")
        ->capture_default_str();

    RunConfig& cool_cfg = configs[3];
    auto* cool = app.add_subcommand("cool", "Pulsed sideband cooling on a thermal ladder");
    add_common(cool, cool_cfg, "cooling.csv");
    add_pulse(cool, cool_cfg);
    cool->add_option("--strategy", cool_cfg.strategy, "rap or pi")->capture_default_str();
    cool->add_option("--nbar", cool_cfg.nbar, "Initial mean phonon number")->capture_default_str();
    cool->add_option("--n-max", cool_cfg.n_max, "Highest level (0 = auto)")->capture_default_str();
    cool->add_option("--cycles", cool_cfg.cycles, "Cooling cycles")->capture_default_str();
    cool->add_option("--base-rabi", cool_cfg.base_rabi_hz, "Sideband Rabi frequency for n = 1, Hz")
        ->capture_default_str();
    cool->add_option("--pi-duration", cool_cfg.pi_duration_s, "Fixed pulse length in s (0 = pi for n = 1)")
        ->capture_default_str();
    cool->add_option("--scaling", cool_cfg.scaling, "sqrt_n or sqrt_n_minus_1")->capture_default_str();

    RunConfig& wave_cfg = configs[4];
    auto* waveform = app.add_subcommand("waveform", "Sampled envelope and chirp");
    add_common(waveform, wave_cfg, "waveform.csv");
    add_pulse(waveform, wave_cfg);
    waveform->add_option("--sample-rate", wave_cfg.sample_rate_hz, "Samples per second")->capture_default_str();
    waveform->add_option("--bits", wave_cfg.quantize_bits, "Amplitude resolution (0 = off)")
        ->capture_default_str();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    RunConfig& cfg = chosen == simulate ? sim_cfg
                     : chosen == sweep  ? sweep_cfg
                     : chosen == rabi   ? rabi_cfg
                     : chosen == cool   ? cool_cfg
                                        : wave_cfg;
    cfg.command = chosen->get_name();
    cfg.use_values = values_opt->count() > 0;

    try {
        cfg.validate();
        if (cfg.command == "simulate") return cmd_simulate(cfg, out);
        if (cfg.command == "sweep") return cmd_sweep(cfg, out);
        if (cfg.command == "rabi") return cmd_rabi(cfg, out, err);
        if (cfg.command == "cool") return cmd_cool(cfg, out);
        return cmd_waveform(cfg, out);
    } catch (const ConfigError& e) {
        err << cfg.command << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << cfg.command << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const IntegrationError& e) {
        err << cfg.command << ": integration failed: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace rap::cli

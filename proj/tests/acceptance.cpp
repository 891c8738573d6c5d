// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rap/analysis.hpp"
#include "rap/cli.hpp"
#include "rap/cooling.hpp"
#include "rap/dynamics.hpp"

using namespace rap;

namespace {

// Tolerances and budgets.
constexpr double kPlateauFloor = 0.99;
constexpr double kPlateauMean = 0.995;
constexpr double kExtendedMean = 0.987;
constexpr double kAdiabaticFinal = 0.999;
constexpr double kNutationSpread = 1e-3;
constexpr double kOracleTol = 1e-6;
constexpr double kRabiTol = 1e-6;
constexpr double kLandauZenerTol = 1e-2;
constexpr double kNormDrift = 1e-6;
constexpr double kConvergenceRatio = 8.0;
constexpr double kFitExact = 1e-6;
constexpr double kFitNoisy = 0.005;
constexpr double kRapTransferFloor = 0.99;
constexpr double kPiTrapCeiling = 0.1;
constexpr double kConservation = 1e-9;

// Largest | |R| - 1 | seen in any default-step trajectory below.
double g_norm_drift = 0.0;

Trajectory tracked(const Pulse& p) {
    Trajectory t = evolve_bloch(p, BlochState::ground());
    for (const auto& r : t.states) g_norm_drift = std::max(g_norm_drift, std::abs(r.norm() - 1.0));
    return t;
}

Pulse plateau_pulse(double span_hz) {
    Pulse p;
    p.duration_s = 150e-6;
    p.peak_rabi_hz = 512e3;
    p.chirp_span_hz = span_hz;
    return p;
}

std::vector<double> span_range(double from, double to, double step) {
    std::vector<double> v;
    for (int i = 0; from + i * step <= to + 1.0; ++i) v.push_back(from + i * step);
    return v;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

int g_failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = budget_s <= 0.0 || elapsed < budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++g_failures;
    std::string timing = fmt("%.2fs", elapsed);
    if (budget_s > 0.0) timing += fmt(" / %.0fs", budget_s);
    std::printf("[%s] %d %s: %s (%s)%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), timing.c_str(),
                in_time ? "" : " over budget");
    std::fflush(stdout);
}

Outcome plateau() {
    std::vector<double> eff;
    for (double span : span_range(200e3, 500e3, 50e3)) eff.push_back(tracked(plateau_pulse(span)).final_population());
    const double lo = *std::min_element(eff.begin(), eff.end());
    const double m = mean(eff);
    return {lo >= kPlateauFloor && m >= kPlateauMean,
            fmt("%zu points, min=%.6f (>= %.3f), mean=%.6f (>= %.3f)", eff.size(), lo, kPlateauFloor, m, kPlateauMean)};
}

Outcome extended() {
    std::vector<double> eff;
    for (double span : span_range(100e3, 600e3, 50e3)) eff.push_back(tracked(plateau_pulse(span)).final_population());
    const double m = mean(eff);
    return {m >= kExtendedMean, fmt("%zu points, mean=%.6f (>= %.3f)", eff.size(), m, kExtendedMean)};
}

Outcome contrast() {
    const double p400 = tracked(plateau_pulse(400e3)).final_population();
    const Trajectory fast = tracked(plateau_pulse(1400e3));
    const double spread = tail_population_spread(fast, 0.1);
    const bool ok400 = p400 > kAdiabaticFinal;
    const bool ok1400 = spread > kNutationSpread;
    return {ok400 && ok1400, fmt("400 kHz P1=%.7f (> %.3f) %s; 1400 kHz final-10%% spread=%.3g (> %.0e) %s, P1=%.7f",
                                 p400, kAdiabaticFinal, ok400 ? "ok" : "FAIL", spread, kNutationSpread,
                                 ok1400 ? "ok" : "FAIL", fast.final_population())};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> dur(10e-6, 500e-6), peak(0.0, 1e6), span(0.0, 2e6), phase(-3.14, 3.14);
    double worst = 0.0;
    const int trials = 100;
    for (int i = 0; i < trials; ++i) {
        Pulse p;
        p.duration_s = dur(rng);
        p.peak_rabi_hz = peak(rng);
        p.chirp_span_hz = span(rng);
        p.phase_offset_rad = phase(rng);
        const double bloch = tracked(p).final_population();
        const auto amps = evolve_amplitudes(p, AmplitudeState{});
        worst = std::max(worst, std::abs(bloch - excited_population(to_bloch(amps.states.back()))));
    }
    return {worst < kOracleTol, fmt("%d pulses, max |dP1|=%.3g (< %.0e)", trials, worst, kOracleTol)};
}

Outcome closed_forms() {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> rabi(10e3, 1e6), det(-1e6, 1e6), dur(0.5e-6, 20e-6);
    double worst_rabi = 0.0;
    const int triples = 50;
    for (int i = 0; i < triples; ++i) {
        const double f = rabi(rng), d = det(rng), t = dur(rng);
        Pulse p;
        p.duration_s = t;
        p.peak_rabi_hz = f;
        p.chirp_span_hz = 0.0;
        p.detuning_offset_hz = d;
        p.envelope = EnvelopeKind::constant;
        const double omega = kTwoPi * f, delta = kTwoPi * d;
        const double w2 = omega * omega + delta * delta;
        const double s = std::sin(0.5 * std::sqrt(w2) * t);
        worst_rabi = std::max(worst_rabi, std::abs(tracked(p).final_population() - omega * omega / w2 * s * s));
    }

    // Edge detuning >= 100x the Rabi frequency so the sweep covers the crossing.
    struct Case {
        double rabi_hz, span_hz, duration_s;
    };
    double worst_lz = 0.0;
    for (const Case c : {Case{20e3, 4e6, 200e-6}, Case{20e3, 4e6, 800e-6}, Case{40e3, 8e6, 400e-6},
                         Case{10e3, 2e6, 1000e-6}}) {
        Pulse p;
        p.duration_s = c.duration_s;
        p.peak_rabi_hz = c.rabi_hz;
        p.chirp_span_hz = c.span_hz;
        p.envelope = EnvelopeKind::constant;
        const double omega = kTwoPi * c.rabi_hz;
        const double rate = kTwoPi * c.span_hz / c.duration_s;
        const double lz = 1.0 - std::exp(-std::numbers::pi * omega * omega / (2.0 * rate));
        worst_lz = std::max(worst_lz, std::abs(tracked(p).final_population() - lz));
    }
    return {worst_rabi < kRabiTol && worst_lz < kLandauZenerTol,
            fmt("%d Rabi triples max err=%.3g (< %.0e); Landau-Zener max err=%.3g (< %.0e)", triples, worst_rabi,
                kRabiTol, worst_lz, kLandauZenerTol)};
}

double distance(const BlochState& a, const BlochState& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

Outcome conservation_and_convergence() {
    for (double span : {0.0, 200e3, 400e3, 800e3, 1400e3}) (void)tracked(plateau_pulse(span));
    double worst_ratio = 1e300;
    for (double span : {200e3, 400e3, 600e3}) {
        const Pulse p = plateau_pulse(span);
        const std::size_t n = step_count(p, kMinStepsPerRad);
        const auto coarse = propagate_bloch(p, BlochState::ground(), n);
        const auto half = propagate_bloch(p, BlochState::ground(), 2 * n);
        const auto reference = propagate_bloch(p, BlochState::ground(), 8 * n);
        worst_ratio = std::min(worst_ratio, distance(coarse, reference) / distance(half, reference));
    }
    return {g_norm_drift < kNormDrift && worst_ratio >= kConvergenceRatio,
            fmt("max norm drift over all default runs=%.3g (< %.0e); min step-halving ratio=%.2f (>= %.0f)",
                g_norm_drift, kNormDrift, worst_ratio, kConvergenceRatio)};
}

Outcome rabi_fit() {
    std::vector<double> times(60);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = 10e-6 * i / (times.size() - 1);
    const auto clean = simulate_rabi_scan(512e3, times);
    const double exact = std::abs(fit_rabi(clean, 500e3).fitted_rabi_hz / 512e3 - 1.0);

    NoiseModel noise;
    noise.kind = NoiseKind::binomial;
    noise.shots = 100;
    noise.seed = 20050101;
    const double noisy = std::abs(fit_rabi(add_noise(clean, noise), 500e3).fitted_rabi_hz / 512e3 - 1.0);
    return {exact < kFitExact && noisy < kFitNoisy,
            fmt("noiseless rel err=%.3g (< %.0e); binomial 100 shots seed 20050101 rel err=%.3g (< %.3f)", exact,
                kFitExact, noisy, kFitNoisy)};
}

Outcome cooling() {
    const SidebandCoupling coupling{512e3, SidebandScaling::sqrt_n};
    const Pulse rap = plateau_pulse(400e3);
    const double pi_duration = 1.0 / (2.0 * coupling.base_rabi_hz);
    double rap_min = 1.0, pi_min = 1.0;
    for (int n = 1; n <= 30; ++n) {
        rap_min = std::min(rap_min, sideband_transfer_rap(coupling, rap, n));
        pi_min = std::min(pi_min, sideband_transfer_pi(coupling, pi_duration, n));
    }

    const LadderState initial = thermal_ladder(5.0, default_n_max(5.0));
    double worst_leak = 0.0;
    bool monotone = true;
    for (const CoolingStrategy s : {CoolingStrategy{RapSweep{rap}}, CoolingStrategy{PiFixed{pi_duration}}}) {
        const auto table = transfer_table(coupling, s, initial.n_max());
        LadderState state = initial;
        for (int cycle = 0; cycle < 40; ++cycle) {
            const LadderState next = apply_cooling_cycle(state, table);
            worst_leak = std::max(worst_leak, std::abs(next.total() - state.total()));
            monotone = monotone && next.mean_n() <= state.mean_n();
            state = next;
        }
    }
    return {rap_min > kRapTransferFloor && pi_min < kPiTrapCeiling && worst_leak < kConservation && monotone,
            fmt("RAP min transfer n=1..30 %.6f (> %.2f); pi-pulse min %.3g (< %.1f); max per-cycle leak %.3g "
                "(< %.0e); mean_n non-increasing %s",
                rap_min, kRapTransferFloor, pi_min, kPiTrapCeiling, worst_leak, kConservation,
                monotone ? "yes" : "NO")};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("rap_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.ini");
        cfg << "[sweep]\nfrom = 100e3\nto = 600e3\nstep = 50e3\n\n[rabi]\nseed = 7\n\n[cool]\nstrategy = pi\n";
    }
    const std::vector<std::vector<std::string>> commands{
        {"simulate", "--chirp-span", "1400e3"},
        {"sweep", "--workers", "4"},
        {"rabi"},
        {"cool"},
        {"waveform", "--bits", "14"},
    };
    int files = 0, mismatches = 0;
    for (const auto& cmd : commands) {
        std::string first;
        for (int run = 0; run < 2; ++run) {
            std::vector<std::string> args{"--config", (dir / "run.ini").string()};
            args.insert(args.end(), cmd.begin(), cmd.end());
            const fs::path out = dir / (cmd[0] + std::to_string(run));
            args.insert(args.end(), {"--out", out.string()});
            std::ostringstream sink_out, sink_err;
            if (cli::run(args, sink_out, sink_err) != cli::kExitOk) {
                fs::remove_all(dir);
                return {false, "rapsim " + cmd[0] + " failed: " + sink_err.str()};
            }
            std::string content = slurp(out);
            if (cmd[0] == "cool") content += slurp(out.string() + ".trapped.json");
            if (run == 0) {
                first = content;
            } else {
                ++files;
                if (content != first || content.empty()) ++mismatches;
            }
        }
    }
    fs::remove_all(dir);
    return {mismatches == 0, fmt("%d/%d subcommand outputs byte-identical across two runs", files - mismatches, files)};
}

}  // namespace

int main() {
    criterion(1, "plateau reproduction", 5.0, plateau);
    criterion(2, "extended-range mean", 10.0, extended);
    criterion(3, "adiabatic/non-adiabatic contrast", 1.0, contrast);
    criterion(4, "oracle equivalence", 30.0, oracle_equivalence);
    criterion(5, "closed-form oracles", 10.0, closed_forms);
    criterion(6, "conservation and convergence", 0.0, conservation_and_convergence);
    criterion(7, "Rabi-fit accuracy", 5.0, rabi_fit);
    criterion(8, "cooling contrast", 30.0, cooling);
    criterion(9, "determinism", 0.0, determinism);
    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}

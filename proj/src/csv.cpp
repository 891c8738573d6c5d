#include "rap/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace rap::io {
namespace {

void write_comment(std::ostream& out, std::string_view comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::general, 15);
    return std::string(buf.data(), res.ptr);
}

void write_waveform_csv(std::ostream& out, std::span<const WaveformSample> samples,
                        std::string_view comment) {
    write_comment(out, comment);
    out << "t_s,amplitude,detuning_hz,phase_rad\n";
    for (const auto& s : samples) {
        out << format_number(s.t_s) << ',' << format_number(s.amplitude) << ','
            << format_number(s.detuning_hz) << ',' << format_number(s.phase_rad) << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          std::string_view comment) {
    write_comment(out, comment);
    out << "t_s,rx,ry,rz,p1\n";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const auto& r = trajectory.states[i];
        out << format_number(trajectory.times[i]) << ',' << format_number(r.x) << ','
            << format_number(r.y) << ',' << format_number(r.z) << ','
            << format_number(trajectory.populations[i]) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, std::string_view comment) {
    write_comment(out, comment);
    out << "axis_value,efficiency,peak_adiabaticity_metric,status\n";
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        out << format_number(sweep.axis_values[i]) << ',' << format_number(sweep.efficiencies[i])
            << ',' << format_number(sweep.peak_metric[i]) << ',' << to_string(sweep.status[i])
            << '\n';
    }
}

std::string fit_report_json(const RabiFit& fit) {
    nlohmann::ordered_json j;
    j["fitted_rabi_hz"] = fit.fitted_rabi_hz;
    j["amplitude"] = fit.amplitude;
    j["offset"] = fit.offset;
    j["phase_rad"] = fit.phase_rad;
    j["residual_rms"] = fit.residual_rms;
    j["iterations"] = fit.iterations;
    return j.dump(2);
}

void write_cooling_csv(std::ostream& out, const CoolingReport& report, std::string_view comment) {
    write_comment(out, comment);
    out << "cycle,mean_n,p_ground\n";
    for (std::size_t c = 0; c < report.mean_n_history.size(); ++c) {
        out << c << ',' << format_number(report.mean_n_history[c]) << ','
            << format_number(report.ground_state_population_history[c]) << '\n';
    }
}

std::string trapped_levels_json(const CoolingReport& report) {
    return nlohmann::json(report.trapped_levels).dump();
}

}  // namespace rap::io

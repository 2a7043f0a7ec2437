#include "oamsim/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include "json.hpp"

#include "oamsim/constants.hpp"
#include "oamsim/errors.hpp"

namespace oamsim::output {

using Json = nlohmann::ordered_json;

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return {buf.data(), ptr};
}

namespace {

template <class... Args>
std::string printf_string(const char* fmt, Args... args)
{
    std::array<char, 256> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), fmt, args...);
    return {buf.data(), static_cast<std::size_t>(std::max(n, 0))};
}

std::string schema_id(std::string_view name)
{
    return "oamsim." + std::string(name) + "/" + std::to_string(kSchemaVersion);
}

}  // namespace

std::string csv_schema_line(std::string_view name) { return "# schema: " + schema_id(name) + "\n"; }

namespace {

// Puts the schema member on the first line: {"schema": "...",
std::string dump(const Json& j)
{
    std::string s = j.dump(2);
    if (s.starts_with("{\n  ")) {
        s = "{" + s.substr(4);
    }
    return s + "\n";
}

Json spec_json(const CircuitSpec& spec)
{
    const LinewidthFinesse lf = linewidth_and_finesse(spec.cavity);
    Json cav;
    cav["fsr_hz"] = lf.fsr_hz;
    cav["fwhm_hz"] = lf.fwhm_hz;
    cav["finesse"] = lf.finesse;
    cav["geometric_length_m"] = spec.cavity.geometric_length;
    cav["refractive_index"] = spec.cavity.refractive_index;
    cav["curvature_back_m"] = format_number(spec.cavity.curvature_back);
    cav["curvature_front_m"] = format_number(spec.cavity.curvature_front);
    cav["gouy_phase_rad"] = accumulated_gouy(spec.cavity);
    Json j;
    j["cavity"] = cav;
    j["laser_wavelength_m"] = spec.wavelength();
    j["input_modes"] = spec.input_modes;
    j["target_l"] = spec.target_l;
    j["source_waist_m"] = spec.source_waist;
    j["cavity_waist_m"] = spec.cavity_waist;
    j["detection_waist_m"] = spec.detection_waist;
    j["shift_fidelity"] = spec.shift_fidelity == ShiftFidelity::phase_only ? "phase_only" : "index_shift";
    j["detection"] = spec.detection == DetectionModel::modal_power ? "modal_power" : "projective_vortex";
    j["arm_phase_rad"] = spec.arm_phase;
    j["mirror_flips_right_arm"] = spec.mirror_flips_right_arm;
    j["extra_flips_left_arm"] = spec.extra_flips_left_arm;
    j["p_max"] = spec.truncation.p_max;
    j["l_max"] = spec.truncation.l_max;
    return j;
}

}  // namespace

std::string power_matrix_csv(const CyclicReport& r)
{
    std::string out = csv_schema_line("power_matrix");
    out += "input_l";
    for (const int l : r.output_modes) {
        out += "," + std::to_string(l);
    }
    out += "\n";
    for (std::size_t i = 0; i < r.input_modes.size(); ++i) {
        out += std::to_string(r.input_modes[i]);
        for (const double v : r.power_matrix[i]) {
            out += "," + format_number(v);
        }
        out += "\n";
    }
    return out;
}

std::string efficiencies_csv(const CyclicReport& r)
{
    std::string out = csv_schema_line("efficiencies");
    out += "input_l,efficiency\n";
    for (std::size_t i = 0; i < r.input_modes.size(); ++i) {
        out += std::to_string(r.input_modes[i]) + "," + format_number(r.efficiencies[i]) + "\n";
    }
    return out;
}

std::string spectrum_csv(const SpectrumTrace& trace)
{
    std::string out = csv_schema_line("spectrum");
    out += "wavelength_nm,frequency_offset_GHz,transmission\n";
    for (const auto& p : trace.points) {
        out += format_number(p.wavelength * 1e9) + "," + format_number(p.frequency_offset_hz * 1e-9) + "," +
               format_number(p.transmission) + "\n";
    }
    return out;
}

std::string peaks_csv(const SweepResult& result)
{
    std::string out = csv_schema_line("peaks");
    out += "l,wavelength_nm,frequency_offset_GHz,height\n";
    for (const auto& t : result.traces) {
        for (const auto& p : t.peaks) {
            out += std::to_string(t.l) + "," + format_number(p.wavelength * 1e9) + "," +
                   format_number(p.frequency_offset_hz * 1e-9) + "," + format_number(p.height) + "\n";
        }
    }
    return out;
}

std::string waist_scan_csv(std::span<const WaistScanRow> rows)
{
    std::string out = csv_schema_line("waist_scan");
    out += "l,source_waist_um,transmission,p0_content\n";
    for (const auto& r : rows) {
        out += std::to_string(r.l) + "," + format_number(r.source_waist * 1e6) + "," + format_number(r.transmission) +
               "," + format_number(r.p0_content) + "\n";
    }
    return out;
}

std::string design_trace_csv(const DesignResult& result, const OptimizeSettings& settings)
{
    std::string out = csv_schema_line("design_trace");
    out += "evaluation";
    for (const auto& b : settings.free) {
        out += "," + to_string(b.param);
    }
    out += ",objective,best_so_far\n";
    for (const auto& t : result.trace) {
        out += std::to_string(t.evaluation);
        for (const double v : t.params) {
            out += "," + format_number(v);
        }
        out += "," + format_number(t.objective) + "," + format_number(t.best_so_far) + "\n";
    }
    return out;
}

std::string cyclic_summary(const CyclicReport& r)
{
    std::string out;
    out += printf_string("average efficiency: %.6f\n", r.average_efficiency);
    out += printf_string("experimental reference: %.2f (deviation %+.6f)\n", kReferenceAverageEfficiency,
                         r.average_efficiency - kReferenceAverageEfficiency);
    for (std::size_t i = 0; i < r.input_modes.size(); ++i) {
        out += printf_string("  l = %+d -> %+d: E = %.6f, unaccounted = %.3e\n", r.input_modes[i],
                             r.output_modes[static_cast<std::size_t>(r.target_column[i])], r.efficiencies[i],
                             r.unaccounted_power[i]);
    }
    return out;
}

std::string cyclic_document(const CircuitSpec& spec, const CyclicReport& r)
{
    Json j;
    j["schema"] = schema_id("cyclic");
    j["version"] = kVersion;
    j["spec"] = spec_json(spec);
    j["input_modes"] = r.input_modes;
    j["output_modes"] = r.output_modes;
    j["power_matrix"] = r.power_matrix;
    j["target_column"] = r.target_column;
    j["efficiencies"] = r.efficiencies;
    j["average_efficiency"] = r.average_efficiency;
    j["reference_average_efficiency"] = kReferenceAverageEfficiency;
    j["deviation_from_reference"] = r.average_efficiency - kReferenceAverageEfficiency;
    j["unaccounted_power"] = r.unaccounted_power;
    j["truncation_loss"] = r.truncation_loss;
    j["leaked_power"] = r.leaked_power;
    return dump(j);
}

std::string spectra_document(const CircuitSpec& spec, const SweepResult& result)
{
    Json j;
    j["schema"] = schema_id("spectra");
    j["version"] = kVersion;
    j["spec"] = spec_json(spec);
    j["reference_frequency_hz"] = result.reference_frequency_hz;
    j["warnings"] = result.warnings;
    Json traces = Json::array();
    for (const auto& t : result.traces) {
        Json tj;
        tj["l"] = t.l;
        tj["table"] = "spectrum_" + std::to_string(t.l) + ".csv";
        tj["points"] = t.points.size();
        Json peaks = Json::array();
        for (const auto& p : t.peaks) {
            peaks.push_back(Json{{"wavelength_m", p.wavelength},
                                 {"frequency_offset_hz", p.frequency_offset_hz},
                                 {"height", p.height}});
        }
        tj["peaks"] = peaks;
        traces.push_back(tj);
    }
    j["traces"] = traces;
    return dump(j);
}

std::string waist_scan_document(const CircuitSpec& spec, std::span<const WaistScanRow> rows)
{
    Json j;
    j["schema"] = schema_id("waist_scan");
    j["version"] = kVersion;
    j["spec"] = spec_json(spec);
    Json table = Json::array();
    for (const auto& r : rows) {
        table.push_back(Json{{"l", r.l},
                             {"source_waist_m", r.source_waist},
                             {"transmission", r.transmission},
                             {"p0_content", r.p0_content}});
    }
    j["rows"] = table;
    return dump(j);
}

std::string design_document(const DesignResult& result, const OptimizeSettings& settings)
{
    Json j;
    j["schema"] = schema_id("design");
    j["version"] = kVersion;
    j["objective"] = to_string(settings.objective);
    Json params = Json::array();
    for (std::size_t i = 0; i < settings.free.size(); ++i) {
        params.push_back(Json{{"name", to_string(settings.free[i].param)},
                              {"lower", settings.free[i].lower},
                              {"upper", settings.free[i].upper},
                              {"value", result.params[i]}});
    }
    j["free"] = params;
    j["best_objective"] = result.objective;
    j["refinement_tolerance"] = result.refinement_tolerance;
    j["evaluations"] = result.trace.size();
    j["spec"] = spec_json(result.spec);
    return dump(j);
}

std::string manifest_document(std::string_view subcommand, const std::filesystem::path& config, int threads,
                              std::span<const std::string> files)
{
    Json j;
    j["schema"] = schema_id("manifest");
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["config"] = config.string();
    j["threads"] = threads;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::array<char, 32> stamp{};
    const std::size_t len = std::strftime(stamp.data(), stamp.size(), "%Y-%m-%dT%H:%M:%SZ", &utc);
    j["created_utc"] = std::string(stamp.data(), len);
    j["files"] = std::vector<std::string>(files.begin(), files.end());
    return dump(j);
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

}  // namespace oamsim::output

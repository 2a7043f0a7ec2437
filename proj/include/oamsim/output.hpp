#pragma once

// Plot-ready tables and structured run documents. Every file starts with a
// schema line; numbers use shortest round-trip formatting.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oamsim/analysis.hpp"
#include "oamsim/circuit.hpp"
#include "oamsim/optimize.hpp"

namespace oamsim::output {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;
/// Measured six-mode average efficiency used as the experimental reference.
inline constexpr double kReferenceAverageEfficiency = 0.96;

[[nodiscard]] std::string format_number(double v);

/// "# schema: oamsim.<name>/<version>"
[[nodiscard]] std::string csv_schema_line(std::string_view name);

[[nodiscard]] std::string power_matrix_csv(const CyclicReport& r);
[[nodiscard]] std::string efficiencies_csv(const CyclicReport& r);
[[nodiscard]] std::string spectrum_csv(const SpectrumTrace& trace);
[[nodiscard]] std::string peaks_csv(const SweepResult& result);
[[nodiscard]] std::string waist_scan_csv(std::span<const WaistScanRow> rows);
[[nodiscard]] std::string design_trace_csv(const DesignResult& result, const OptimizeSettings& settings);

/// Human-readable lines, including the deviation from the reference efficiency.
[[nodiscard]] std::string cyclic_summary(const CyclicReport& r);

[[nodiscard]] std::string cyclic_document(const CircuitSpec& spec, const CyclicReport& r);
[[nodiscard]] std::string spectra_document(const CircuitSpec& spec, const SweepResult& result);
[[nodiscard]] std::string waist_scan_document(const CircuitSpec& spec, std::span<const WaistScanRow> rows);
[[nodiscard]] std::string design_document(const DesignResult& result, const OptimizeSettings& settings);

/// Run metadata (timestamp, thread count, files); kept out of the data files.
[[nodiscard]] std::string manifest_document(std::string_view subcommand, const std::filesystem::path& config,
                                            int threads, std::span<const std::string> files);

/// Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace oamsim::output

#pragma once

// INI-style run configuration:
//
//   [cavity]
//   fsr = 7.90 GHz
//   fwhm = 287 MHz
//   curvature_back = 25 mm
//
// Sections: cavity, beam, circuit, sweep, optimize, output. Physical values
// carry units and are converted to SI on parse. '#' or ';' start a comment.

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oamsim/analysis.hpp"
#include "oamsim/circuit.hpp"
#include "oamsim/errors.hpp"
#include "oamsim/optimize.hpp"

namespace oamsim::config {

struct Location {
    int line = 0;    ///< 1-based; 0 when the text has no natural position
    int column = 0;  ///< 1-based
};

struct Issue {
    Location location;
    std::string key;  ///< "section.key" or "section"
    std::string message;

    [[nodiscard]] std::string format() const;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<Issue> issues);
    [[nodiscard]] const std::vector<Issue>& issues() const { return issues_; }

private:
    std::vector<Issue> issues_;
};

using Value = std::variant<double, long long, std::string, std::vector<double>, std::vector<long long>,
                           std::vector<std::string>>;

struct Entry {
    Value value;
    Location location;  ///< of the key
};

class ConfigDocument {
public:
    [[nodiscard]] bool has(std::string_view section, std::string_view key) const;
    [[nodiscard]] const Entry* find(std::string_view section, std::string_view key) const;

    [[nodiscard]] double number(std::string_view section, std::string_view key, double fallback) const;
    [[nodiscard]] long long integer(std::string_view section, std::string_view key, long long fallback) const;
    [[nodiscard]] std::string word(std::string_view section, std::string_view key, std::string fallback) const;
    [[nodiscard]] std::vector<long long> integers(std::string_view section, std::string_view key,
                                                  std::vector<long long> fallback) const;
    [[nodiscard]] std::vector<double> numbers(std::string_view section, std::string_view key,
                                              std::vector<double> fallback) const;
    [[nodiscard]] std::vector<std::string> words(std::string_view section, std::string_view key,
                                                 std::vector<std::string> fallback) const;

    void set(const std::string& section, const std::string& key, Value value, Location where = {});
    [[nodiscard]] const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }
    [[nodiscard]] Location section_location(const std::string& section) const;
    void mark_section(const std::string& section, Location where);

    /// Compares values only, not source locations.
    [[nodiscard]] bool operator==(const ConfigDocument& other) const;

private:
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::map<std::string, Location> section_locations_;
};

struct ParseOptions {
    bool strict = true;  ///< unknown sections and keys are errors; lenient mode only warns
};

/// Throws ConfigError listing every problem found. Warnings (lenient mode) are
/// appended to `warnings` when given.
[[nodiscard]] ConfigDocument parse_config(std::string_view text, const ParseOptions& options = {},
                                          std::vector<std::string>* warnings = nullptr);

/// Canonical text in SI units; parse_config(serialize(d)) == d.
[[nodiscard]] std::string serialize(const ConfigDocument& doc);

/// A small complete config with the six-mode setup.
[[nodiscard]] std::string default_config_text();

/// Tuned circuit; physics errors are rethrown as ConfigError with the location
/// of the section they came from.
[[nodiscard]] CircuitSpec to_circuit_spec(const ConfigDocument& doc);

struct SweepSettings {
    std::vector<int> l_values;
    double span_hz = 0.0;
    int points = 0;
    std::vector<double> waists;
};

[[nodiscard]] SweepSettings to_sweep_settings(const ConfigDocument& doc, const CircuitSpec& spec);

[[nodiscard]] OptimizeSettings to_optimize_settings(const ConfigDocument& doc, const CircuitSpec& spec);

}  // namespace oamsim::config

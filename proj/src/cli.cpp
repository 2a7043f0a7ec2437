#include "oamsim/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "oamsim/analysis.hpp"
#include "oamsim/config.hpp"
#include "oamsim/constants.hpp"
#include "oamsim/errors.hpp"
#include "oamsim/optimize.hpp"
#include "oamsim/output.hpp"

namespace oamsim::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out;
    int threads = 1;
    bool lenient = false;
};

int env_threads()
{
    const char* v = std::getenv(kThreadsEnv);
    if (v == nullptr || *v == '\0') {
        return 1;
    }
    try {
        return std::max(1, std::stoi(v));
    }
    catch (const std::exception&) {
        return 1;
    }
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Files are produced in memory and written only after all computation is done.
using Artifacts = std::vector<std::pair<std::string, std::string>>;

Artifacts run_cyclic_command(const CircuitSpec& spec, const Options& o, std::ostream& out, bool tables, bool document)
{
    const CyclicReport r = run_cyclic(spec, o.threads);
    out << output::cyclic_summary(r);
    Artifacts a;
    if (tables) {
        a.emplace_back("power_matrix.csv", output::power_matrix_csv(r));
        a.emplace_back("efficiencies.csv", output::efficiencies_csv(r));
    }
    if (document) {
        a.emplace_back("cyclic.json", output::cyclic_document(spec, r));
    }
    return a;
}

Artifacts run_spectra_command(const config::ConfigDocument& doc, const CircuitSpec& spec, const Options& o,
                              std::ostream& out, std::ostream& err, bool tables, bool document)
{
    const config::SweepSettings s = config::to_sweep_settings(doc, spec);
    const SweepGrid grid = wavelength_grid_around(spec.laser_frequency, s.span_hz, s.points);
    const PreparationSettings prep{spec.source_waist, spec.cavity_waist, spec.shift_fidelity, spec.truncation.p_max};
    const SweepResult r = wavelength_sweep(spec.cavity, grid, s.l_values, prep, spec.laser_frequency / (2.0 * kPi),
                                           o.threads);
    for (const auto& w : r.warnings) {
        err << "warning: " << w << "\n";
    }
    Artifacts a;
    for (const auto& t : r.traces) {
        out << "l = " << t.l << ": " << t.peaks.size() << " peaks\n";
        if (tables) {
            a.emplace_back("spectrum_" + std::to_string(t.l) + ".csv", output::spectrum_csv(t));
        }
    }
    if (tables) {
        a.emplace_back("peaks.csv", output::peaks_csv(r));
    }
    if (document) {
        a.emplace_back("spectra.json", output::spectra_document(spec, r));
    }
    return a;
}

Artifacts run_waist_scan_command(const config::ConfigDocument& doc, const CircuitSpec& spec, const Options& o,
                                 std::ostream& out, bool tables, bool document)
{
    const config::SweepSettings s = config::to_sweep_settings(doc, spec);
    const auto rows = waist_scan(spec, s.l_values, s.waists, o.threads);
    for (const auto& r : rows) {
        out << "l = " << r.l << ", w = " << r.source_waist * 1e6 << " um: T = " << r.transmission << "\n";
    }
    Artifacts a;
    if (tables) {
        a.emplace_back("waist_scan.csv", output::waist_scan_csv(rows));
    }
    if (document) {
        a.emplace_back("waist_scan.json", output::waist_scan_document(spec, rows));
    }
    return a;
}

Artifacts run_design_command(const config::ConfigDocument& doc, const CircuitSpec& spec, const Options& o,
                             std::ostream& out, bool tables, bool document)
{
    OptimizeSettings settings = config::to_optimize_settings(doc, spec);
    settings.threads = o.threads;
    const DesignResult r = optimize_design(spec, settings);
    out << "objective " << to_string(settings.objective) << " = " << output::format_number(r.objective) << "\n";
    for (std::size_t i = 0; i < settings.free.size(); ++i) {
        out << "  " << to_string(settings.free[i].param) << " = " << output::format_number(r.params[i]) << "\n";
    }
    Artifacts a;
    if (tables) {
        a.emplace_back("design_trace.csv", output::design_trace_csv(r, settings));
    }
    if (document) {
        a.emplace_back("design.json", output::design_document(r, settings));
    }
    return a;
}

void write_artifacts(const std::string& subcommand, const Options& o, const Artifacts& artifacts)
{
    const fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    std::vector<std::string> names;
    for (const auto& [name, content] : artifacts) {
        output::write_file(dir / name, content);
        names.push_back(name);
    }
    output::write_file(dir / "manifest.json", output::manifest_document(subcommand, o.config, o.threads, names));
}

int execute(const std::string& subcommand, const Options& o, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> warnings;
    const config::ConfigDocument doc =
        config::parse_config(read_text(o.config), config::ParseOptions{!o.lenient}, &warnings);
    for (const auto& w : warnings) {
        err << "warning: " << w << "\n";
    }
    const CircuitSpec spec = config::to_circuit_spec(doc);
    const bool tables = doc.word("output", "tables", "true") == "true";
    const bool document = doc.word("output", "document", "true") == "true";

    if (subcommand == "validate") {
        if (doc.has("optimize", "objective") || doc.has("optimize", "free")) {
            (void)config::to_optimize_settings(doc, spec);
        }
        (void)config::to_sweep_settings(doc, spec);
        out << "config OK\n";
        return kExitOk;
    }
    if (o.out.empty()) {
        throw config::ConfigError({{{}, "--out", "an output directory is required for " + subcommand}});
    }

    Artifacts artifacts;
    if (subcommand == "cyclic") {
        artifacts = run_cyclic_command(spec, o, out, tables, document);
    }
    else if (subcommand == "spectra") {
        artifacts = run_spectra_command(doc, spec, o, out, err, tables, document);
    }
    else if (subcommand == "waist-scan") {
        artifacts = run_waist_scan_command(doc, spec, o, out, tables, document);
    }
    else {
        artifacts = run_design_command(doc, spec, o, out, tables, document);
    }
    write_artifacts(subcommand, o, artifacts);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Orbital-angular-momentum optical circuit simulator", "oamsim"};
    app.require_subcommand(1);
    Options o;
    o.threads = env_threads();

    const std::pair<const char*, const char*> commands[] = {
        {"cyclic", "power matrix and efficiencies of the cyclic transformation"},
        {"spectra", "FP1 transmission vs wavelength for each input charge"},
        {"waist-scan", "target transmission and p=0 content vs source waist"},
        {"design", "optimise free parameters for the configured objective"},
        {"validate", "check the configuration and exit"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "configuration file")->required();
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--threads", o.threads, std::string("worker threads (default $") + kThreadsEnv + ")")
            ->check(CLI::PositiveNumber);
        auto* strict = sub->add_flag("--strict", "reject unknown sections and keys (default)");
        auto* lenient = sub->add_flag("--lenient", o.lenient, "warn about unknown sections and keys");
        strict->excludes(lenient);
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) {
        rev.pop_back();
    }
    try {
        app.parse(rev);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitConfig;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    try {
        return execute(subcommand, o, out, err);
    }
    catch (const config::ConfigError& e) {
        err << "config error:\n" << e.what() << "\n";
        return kExitConfig;
    }
    catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    catch (const fs::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    catch (const Error& e) {
        err << "numerical/physics error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace oamsim::cli

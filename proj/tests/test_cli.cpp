#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "oamsim/cli.hpp"
#include "oamsim/config.hpp"

namespace fs = std::filesystem;
using namespace oamsim;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "oamsim");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("oamsim_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text)
{
    const fs::path p = dir / "run.ini";
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

}  // namespace

TEST_CASE("validate: good config exits 0 and writes nothing")
{
    const fs::path dir = scratch("validate");
    const fs::path cfg = write_config(dir, config::default_config_text());
    const Run r = run({"validate", "--config", cfg.string(), "--out", (dir / "out").string()});
    CHECK(r.code == cli::kExitOk);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("exit codes")
{
    const fs::path dir = scratch("codes");
    CHECK(run({"validate", "--config", (dir / "missing.ini").string()}).code == cli::kExitIo);

    const fs::path bad = write_config(dir, "[cavity]\nfsr = 7.9 um\n");
    const Run r = run({"validate", "--config", bad.string()});
    CHECK(r.code == cli::kExitConfig);
    CHECK(r.err.find("cavity.fsr") != std::string::npos);

    std::string unstable = config::default_config_text();
    unstable.replace(unstable.find("curvature_back = 25 mm"), 22, "curvature_back = 5 mm");
    const fs::path geo = write_config(dir, unstable);
    CHECK(run({"cyclic", "--config", geo.string(), "--out", (dir / "o").string()}).code == cli::kExitNumerical);

    const fs::path good = write_config(dir, config::default_config_text());
    const fs::path blocker = dir / "file";
    std::ofstream(blocker) << "x";
    CHECK(run({"cyclic", "--config", good.string(), "--out", (blocker / "sub").string()}).code == cli::kExitIo);

    CHECK(run({"frobnicate"}).code == cli::kExitConfig);
    CHECK(run({"cyclic", "--config", good.string(), "--strict", "--lenient"}).code == cli::kExitConfig);
    CHECK(run({"cyclic", "--config", good.string()}).code == cli::kExitConfig);
}

TEST_CASE("lenient flag downgrades unknown keys to warnings")
{
    const fs::path dir = scratch("lenient");
    std::string text = config::default_config_text();
    text.insert(text.find("[beam]"), "colour = red\n\n");
    const fs::path typo = write_config(dir, text);
    CHECK(run({"validate", "--config", typo.string()}).code == cli::kExitConfig);
    const Run lenient = run({"validate", "--config", typo.string(), "--lenient"});
    CHECK(lenient.code == cli::kExitOk);
    CHECK(lenient.err.find("colour") != std::string::npos);
}

TEST_CASE("cyclic writes schema-tagged tables and a document")
{
    const fs::path dir = scratch("cyclic");
    const fs::path cfg = write_config(dir, config::default_config_text());
    const Run r = run({"cyclic", "--config", cfg.string(), "--out", (dir / "out").string(), "--threads", "3"});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.find("average efficiency") != std::string::npos);
    CHECK(r.out.find("experimental reference: 0.96") != std::string::npos);

    CHECK(first_line(dir / "out/power_matrix.csv") == "# schema: oamsim.power_matrix/1");
    CHECK(first_line(dir / "out/efficiencies.csv") == "# schema: oamsim.efficiencies/1");
    CHECK(first_line(dir / "out/cyclic.json") == "{\"schema\": \"oamsim.cyclic/1\",");
    CHECK(first_line(dir / "out/manifest.json") == "{\"schema\": \"oamsim.manifest/1\",");

    std::istringstream pm(slurp(dir / "out/power_matrix.csv"));
    std::string line;
    std::getline(pm, line);
    std::getline(pm, line);
    CHECK(line == "input_l,-3,-2,-1,0,1,2");
    int rows = 0;
    while (std::getline(pm, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
    }
    CHECK(rows == 6);
}

TEST_CASE("cyclic output is byte-identical across runs and thread counts")
{
    const fs::path dir = scratch("determinism");
    const fs::path cfg = write_config(dir, config::default_config_text());
    REQUIRE(run({"cyclic", "--config", cfg.string(), "--out", (dir / "a").string(), "--threads", "1"}).code == 0);
    REQUIRE(run({"cyclic", "--config", cfg.string(), "--out", (dir / "b").string(), "--threads", "4"}).code == 0);
    for (const char* f : {"power_matrix.csv", "efficiencies.csv", "cyclic.json"}) {
        CAPTURE(f);
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
}

TEST_CASE("spectra writes seven traces and a peak table")
{
    const fs::path dir = scratch("spectra");
    const fs::path cfg = write_config(dir, config::default_config_text());
    const Run r = run({"spectra", "--config", cfg.string(), "--out", (dir / "out").string(), "--threads", "4"});
    REQUIRE(r.code == cli::kExitOk);
    for (const int l : {0, 1, -1, 2, -2, 3, -3}) {
        const fs::path p = dir / "out" / ("spectrum_" + std::to_string(l) + ".csv");
        REQUIRE(fs::exists(p));
        CHECK(first_line(p) == "# schema: oamsim.spectrum/1");
        std::ifstream in(p);
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        CHECK(line == "wavelength_nm,frequency_offset_GHz,transmission");
    }
    CHECK(first_line(dir / "out/peaks.csv") == "# schema: oamsim.peaks/1");
    CHECK(first_line(dir / "out/spectra.json") == "{\"schema\": \"oamsim.spectra/1\",");
}

TEST_CASE("waist-scan and design subcommands")
{
    const fs::path dir = scratch("scan_design");
    const fs::path cfg = write_config(dir, config::default_config_text() + R"(
[optimize]
objective = max_target_p0_content
free = source_waist
golden_iterations = 20
)");
    REQUIRE(run({"waist-scan", "--config", cfg.string(), "--out", (dir / "scan").string()}).code == 0);
    CHECK(first_line(dir / "scan/waist_scan.csv") == "# schema: oamsim.waist_scan/1");
    const Run d = run({"design", "--config", cfg.string(), "--out", (dir / "design").string()});
    REQUIRE(d.code == 0);
    CHECK(first_line(dir / "design/design.json") == "{\"schema\": \"oamsim.design/1\",");
    CHECK(first_line(dir / "design/design_trace.csv") == "# schema: oamsim.design_trace/1");
}

TEST_CASE("output switches suppress files")
{
    const fs::path dir = scratch("switches");
    const fs::path cfg = write_config(dir, config::default_config_text() + "\n[output]\ntables = false\n");
    REQUIRE(run({"cyclic", "--config", cfg.string(), "--out", (dir / "out").string()}).code == 0);
    CHECK_FALSE(fs::exists(dir / "out/power_matrix.csv"));
    CHECK(fs::exists(dir / "out/cyclic.json"));
}

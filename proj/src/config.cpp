#include "oamsim/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "oamsim/constants.hpp"

namespace oamsim::config {

std::string Issue::format() const
{
    std::string where = location.line > 0
                            ? "line " + std::to_string(location.line) + ", column " + std::to_string(location.column)
                            : std::string("config");
    return where + ": " + key + ": " + message;
}

namespace {

std::string join_issues(const std::vector<Issue>& issues)
{
    std::string out;
    for (const auto& i : issues) {
        if (!out.empty()) {
            out += '\n';
        }
        out += i.format();
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<Issue> issues) : Error(join_issues(issues)), issues_(std::move(issues)) {}

bool ConfigDocument::has(std::string_view section, std::string_view key) const { return find(section, key) != nullptr; }

const Entry* ConfigDocument::find(std::string_view section, std::string_view key) const
{
    const auto s = sections_.find(std::string(section));
    if (s == sections_.end()) {
        return nullptr;
    }
    const auto k = s->second.find(std::string(key));
    return k == s->second.end() ? nullptr : &k->second;
}

namespace {

template <class T>
T get_or(const ConfigDocument& d, std::string_view section, std::string_view key, T fallback)
{
    const Entry* e = d.find(section, key);
    if (e == nullptr) {
        return fallback;
    }
    if (const T* v = std::get_if<T>(&e->value)) {
        return *v;
    }
    throw ConfigError({{e->location, std::string(section) + "." + std::string(key), "value has the wrong type"}});
}

}  // namespace

double ConfigDocument::number(std::string_view s, std::string_view k, double fallback) const
{
    return get_or<double>(*this, s, k, fallback);
}

long long ConfigDocument::integer(std::string_view s, std::string_view k, long long fallback) const
{
    return get_or<long long>(*this, s, k, fallback);
}

std::string ConfigDocument::word(std::string_view s, std::string_view k, std::string fallback) const
{
    return get_or<std::string>(*this, s, k, std::move(fallback));
}

std::vector<long long> ConfigDocument::integers(std::string_view s, std::string_view k,
                                                std::vector<long long> fallback) const
{
    return get_or<std::vector<long long>>(*this, s, k, std::move(fallback));
}

std::vector<double> ConfigDocument::numbers(std::string_view s, std::string_view k, std::vector<double> fallback) const
{
    return get_or<std::vector<double>>(*this, s, k, std::move(fallback));
}

std::vector<std::string> ConfigDocument::words(std::string_view s, std::string_view k,
                                               std::vector<std::string> fallback) const
{
    return get_or<std::vector<std::string>>(*this, s, k, std::move(fallback));
}

void ConfigDocument::set(const std::string& section, const std::string& key, Value value, Location where)
{
    sections_[section][key] = Entry{std::move(value), where};
}

Location ConfigDocument::section_location(const std::string& section) const
{
    const auto it = section_locations_.find(section);
    return it == section_locations_.end() ? Location{} : it->second;
}

void ConfigDocument::mark_section(const std::string& section, Location where)
{
    section_locations_[section] = where;
    sections_[section];
}

bool ConfigDocument::operator==(const ConfigDocument& other) const
{
    auto strip = [](const ConfigDocument& d) {
        std::map<std::string, std::map<std::string, Value>> out;
        for (const auto& [s, keys] : d.sections_) {
            for (const auto& [k, e] : keys) {
                out[s][k] = e.value;
            }
        }
        return out;
    };
    return strip(*this) == strip(other);
}

namespace {

enum class Kind { length, frequency, angle, number, integer, word, integer_list, length_list, word_list };

struct KeySpec {
    std::string_view section;
    std::string_view key;
    Kind kind;
    bool required = false;
    std::vector<std::string_view> choices{};
};

const std::vector<KeySpec>& schema()
{
    static const std::vector<KeySpec> keys = {
        {"cavity", "fsr", Kind::frequency, true},
        {"cavity", "fwhm", Kind::frequency, true},
        {"cavity", "curvature_back", Kind::length, true},
        {"cavity", "curvature_front", Kind::length},
        {"cavity", "refractive_index", Kind::number},
        {"cavity", "internal_loss_fwhm", Kind::frequency},
        {"cavity", "gouy_branch", Kind::word, false, {"plus", "minus"}},
        {"beam", "wavelength", Kind::length, true},
        {"beam", "cavity_waist", Kind::length, true},
        {"beam", "source_waist", Kind::length},
        {"beam", "detection_waist", Kind::length},
        {"circuit", "input_modes", Kind::integer_list},
        {"circuit", "target_l", Kind::integer},
        {"circuit", "shift_fidelity", Kind::word, false, {"phase_only", "index_shift"}},
        {"circuit", "detection", Kind::word, false, {"projective_vortex", "modal_power"}},
        {"circuit", "arm_phase", Kind::angle},
        {"circuit", "mirror_flips_right_arm", Kind::integer},
        {"circuit", "extra_flips_left_arm", Kind::integer},
        {"circuit", "fp2_offset", Kind::frequency},
        {"circuit", "p_max", Kind::integer},
        {"circuit", "l_max", Kind::integer},
        {"sweep", "l_values", Kind::integer_list},
        {"sweep", "span", Kind::frequency},
        {"sweep", "points", Kind::integer},
        {"sweep", "waists", Kind::length_list},
        {"optimize", "objective", Kind::word, false,
         {"max_min_mode_separation", "max_avg_efficiency", "max_target_p0_content"}},
        {"optimize", "free", Kind::word_list, false, {"source_waist", "optical_length_offset"}},
        {"optimize", "source_waist_min", Kind::length},
        {"optimize", "source_waist_max", Kind::length},
        {"optimize", "length_offset_min", Kind::length},
        {"optimize", "length_offset_max", Kind::length},
        {"optimize", "coarse_points", Kind::integer},
        {"optimize", "golden_iterations", Kind::integer},
        {"optimize", "sweeps", Kind::integer},
        {"optimize", "separation_p_max", Kind::integer},
        {"output", "tables", Kind::word, false, {"true", "false"}},
        {"output", "document", Kind::word, false, {"true", "false"}},
    };
    return keys;
}

constexpr std::array<std::string_view, 6> kSections{"cavity", "beam", "circuit", "sweep", "optimize", "output"};

const KeySpec* lookup(std::string_view section, std::string_view key)
{
    for (const auto& k : schema()) {
        if (k.section == section && k.key == key) {
            return &k;
        }
    }
    return nullptr;
}

struct Unit {
    std::string_view name;
    double scale;
};

constexpr std::array<Unit, 7> kLengthUnits{{{"nm", 1e-9}, {"um", 1e-6}, {"µm", 1e-6}, {"mm", 1e-3}, {"cm", 1e-2},
                                            {"m", 1.0}, {"km", 1e3}}};
constexpr std::array<Unit, 5> kFrequencyUnits{{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}}};
constexpr std::array<Unit, 3> kAngleUnits{{{"rad", 1.0}, {"mrad", 1e-3}, {"deg", kPi / 180.0}}};

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string_view kind_name(Kind k)
{
    switch (k) {
        case Kind::length: return "a length (nm, um, mm, cm, m)";
        case Kind::frequency: return "a frequency (Hz, kHz, MHz, GHz, THz)";
        case Kind::angle: return "an angle (rad, mrad, deg)";
        case Kind::number: return "a plain number";
        case Kind::integer: return "an integer";
        case Kind::word: return "a word";
        case Kind::integer_list: return "a comma-separated list of integers";
        case Kind::length_list: return "a comma-separated list of lengths";
        case Kind::word_list: return "a comma-separated list of words";
    }
    return "a value";
}

template <std::size_t N>
std::optional<double> unit_scale(const std::array<Unit, N>& units, std::string_view name)
{
    for (const auto& u : units) {
        if (u.name == name) {
            return u.scale;
        }
    }
    return std::nullopt;
}

bool known_unit(std::string_view name)
{
    return unit_scale(kLengthUnits, name) || unit_scale(kFrequencyUnits, name) || unit_scale(kAngleUnits, name);
}

// A value token failed; `offset` is relative to the value start.
struct ValueError {
    std::size_t offset;
    std::string message;
};

std::optional<double> parse_double(std::string_view s)
{
    if (s == "inf" || s == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

// Splits "7.90 GHz" / "50um" into number and unit parts.
std::pair<std::string_view, std::string_view> split_quantity(std::string_view s)
{
    std::size_t i = 0;
    if (s.starts_with("inf") || s.starts_with("+inf") || s.starts_with("-inf")) {
        i = s.find("inf") + 3;
    }
    else {
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) != 0 || s[i] == '.' || s[i] == '-' ||
                                s[i] == '+' || s[i] == 'e' || s[i] == 'E')) {
            ++i;
        }
    }
    return {s.substr(0, i), trim(s.substr(i))};
}

double parse_quantity(std::string_view token, std::size_t offset, Kind kind)
{
    const auto [num, unit] = split_quantity(token);
    const auto value = parse_double(num);
    if (num.empty() || !value) {
        throw ValueError{offset, "cannot read a number from '" + std::string(token) + "'"};
    }
    if (kind == Kind::number) {
        if (!unit.empty()) {
            throw ValueError{offset, "expected " + std::string(kind_name(kind)) + ", got unit '" + std::string(unit) +
                                         "'"};
        }
        return *value;
    }
    if (unit.empty()) {
        if (std::isinf(*value) && kind == Kind::length) {
            return *value;
        }
        throw ValueError{offset, "missing unit; expected " + std::string(kind_name(kind))};
    }
    std::optional<double> scale;
    switch (kind) {
        case Kind::length:
        case Kind::length_list: scale = unit_scale(kLengthUnits, unit); break;
        case Kind::frequency: scale = unit_scale(kFrequencyUnits, unit); break;
        case Kind::angle: scale = unit_scale(kAngleUnits, unit); break;
        default: break;
    }
    if (!scale) {
        const std::string what = known_unit(unit) ? "unit mismatch: " : "unknown unit: ";
        throw ValueError{offset, what + "expected " + std::string(kind_name(kind)) + ", got '" + std::string(unit) + "'"};
    }
    return *value * *scale;
}

long long parse_integer(std::string_view token, std::size_t offset)
{
    long long v = 0;
    const char* first = token.data();
    if (!token.empty() && token.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw ValueError{offset, "expected an integer, got '" + std::string(token) + "'"};
    }
    return v;
}

std::string check_choice(const KeySpec& spec, std::string_view token, std::size_t offset)
{
    if (token.empty()) {
        throw ValueError{offset, "empty value"};
    }
    if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), token) == spec.choices.end()) {
        std::string allowed;
        for (const auto c : spec.choices) {
            allowed += (allowed.empty() ? "" : ", ") + std::string(c);
        }
        throw ValueError{offset, "'" + std::string(token) + "' is not one of: " + allowed};
    }
    return std::string(token);
}

// Comma-separated items with their offsets inside the value.
std::vector<std::pair<std::string_view, std::size_t>> split_list(std::string_view s)
{
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        const std::string_view raw = s.substr(start, comma == std::string_view::npos ? s.npos : comma - start);
        const auto lead = raw.find_first_not_of(" \t");
        out.emplace_back(trim(raw), start + (lead == std::string_view::npos ? 0 : lead));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

Value parse_value(const KeySpec& spec, std::string_view text)
{
    switch (spec.kind) {
        case Kind::length:
        case Kind::frequency:
        case Kind::angle:
        case Kind::number: return parse_quantity(text, 0, spec.kind);
        case Kind::integer: return parse_integer(text, 0);
        case Kind::word: return check_choice(spec, text, 0);
        case Kind::integer_list: {
            std::vector<long long> v;
            for (const auto& [item, off] : split_list(text)) {
                v.push_back(parse_integer(item, off));
            }
            return v;
        }
        case Kind::length_list: {
            std::vector<double> v;
            for (const auto& [item, off] : split_list(text)) {
                v.push_back(parse_quantity(item, off, Kind::length_list));
            }
            return v;
        }
        case Kind::word_list: {
            std::vector<std::string> v;
            for (const auto& [item, off] : split_list(text)) {
                v.push_back(check_choice(spec, item, off));
            }
            return v;
        }
    }
    throw ValueError{0, "unsupported value"};
}

int column_of(std::string_view line, std::string_view part)
{
    return static_cast<int>(part.data() - line.data()) + 1;
}

}  // namespace

ConfigDocument parse_config(std::string_view text, const ParseOptions& options, std::vector<std::string>* warnings)
{
    ConfigDocument doc;
    std::vector<Issue> issues;
    auto problem = [&](Location loc, std::string key, std::string message, bool soft = false) {
        Issue issue{loc, std::move(key), std::move(message)};
        if (soft && !options.strict) {
            if (warnings != nullptr) {
                warnings->push_back(issue.format());
            }
            return;
        }
        issues.push_back(std::move(issue));
    };

    std::string section;
    bool section_known = false;
    std::set<std::string> seen_sections;
    std::set<std::string> present;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view content = line;
        const auto hash = content.find_first_of("#;");
        if (hash != std::string_view::npos) {
            content = content.substr(0, hash);
        }
        content = trim(content);
        if (content.empty()) {
            continue;
        }
        const Location at{line_no, column_of(line, content)};

        if (content.front() == '[') {
            if (content.back() != ']') {
                problem(at, "section", "syntax error: section header must end with ']'");
                section.clear();
                section_known = false;
                continue;
            }
            section = std::string(trim(content.substr(1, content.size() - 2)));
            section_known = std::find(kSections.begin(), kSections.end(), section) != kSections.end();
            if (!section_known) {
                problem(at, section, "unknown section [" + section + "]", true);
                continue;
            }
            if (!seen_sections.insert(section).second) {
                problem(at, section, "duplicate section [" + section + "]");
                continue;
            }
            doc.mark_section(section, at);
            continue;
        }

        const auto eq = content.find('=');
        if (eq == std::string_view::npos) {
            problem(at, section.empty() ? std::string(content) : section,
                    "syntax error: expected 'key = value' or '[section]'");
            continue;
        }
        const std::string_view key = trim(content.substr(0, eq));
        const std::string_view raw_value = trim(content.substr(eq + 1));
        const Location key_at{line_no, key.empty() ? at.column : column_of(line, key)};
        const std::string full = section + "." + std::string(key);

        if (key.empty()) {
            problem(key_at, full, "syntax error: missing key before '='");
            continue;
        }
        if (section.empty()) {
            problem(key_at, std::string(key), "syntax error: key outside of any section");
            continue;
        }
        if (!section_known) {
            continue;  // already reported (or tolerated) with the section header
        }
        const KeySpec* spec = lookup(section, key);
        if (spec == nullptr) {
            problem(key_at, full, "unknown key", true);
            continue;
        }
        if (!present.insert(full).second) {
            problem(key_at, full, "duplicate key");
            continue;
        }
        if (raw_value.empty()) {
            problem(Location{line_no, column_of(line, content.substr(eq + 1)) + 1}, full, "missing value");
            continue;
        }
        try {
            doc.set(section, std::string(key), parse_value(*spec, raw_value), key_at);
        }
        catch (const ValueError& e) {
            problem(Location{line_no, column_of(line, raw_value) + static_cast<int>(e.offset)}, full, e.message);
        }
    }

    for (const auto& k : schema()) {
        if (!k.required) {
            continue;
        }
        const std::string sec(k.section);
        if (!present.contains(sec + "." + std::string(k.key))) {
            // Point at the section header, or the end of the text if the section is absent.
            Location where = doc.section_location(sec);
            if (where.line == 0) {
                where = {std::max(line_no, 1), 1};
            }
            problem(where, sec + "." + std::string(k.key), "missing required key");
        }
    }
    if (!issues.empty()) {
        throw ConfigError(std::move(issues));
    }
    return doc;
}

namespace {

std::string format_double(double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return {buf.data(), ptr};
}

std::string si_unit(Kind k)
{
    switch (k) {
        case Kind::length:
        case Kind::length_list: return " m";
        case Kind::frequency: return " Hz";
        case Kind::angle: return " rad";
        default: return "";
    }
}

}  // namespace

std::string serialize(const ConfigDocument& doc)
{
    std::string out;
    for (const auto section : kSections) {
        const auto s = doc.sections().find(std::string(section));
        if (s == doc.sections().end()) {
            continue;
        }
        if (!out.empty()) {
            out += '\n';
        }
        out += "[" + std::string(section) + "]\n";
        for (const auto& k : schema()) {
            if (k.section != section) {
                continue;
            }
            const Entry* e = doc.find(section, k.key);
            if (e == nullptr) {
                continue;
            }
            std::string value;
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        value = format_double(v) + (std::isinf(v) ? std::string() : si_unit(k.kind));
                    }
                    else if constexpr (std::is_same_v<T, long long>) {
                        value = std::to_string(v);
                    }
                    else if constexpr (std::is_same_v<T, std::string>) {
                        value = v;
                    }
                    else if constexpr (std::is_same_v<T, std::vector<double>>) {
                        for (std::size_t i = 0; i < v.size(); ++i) {
                            value += (i ? ", " : "") + format_double(v[i]) + si_unit(k.kind);
                        }
                    }
                    else if constexpr (std::is_same_v<T, std::vector<long long>>) {
                        for (std::size_t i = 0; i < v.size(); ++i) {
                            value += (i ? ", " : "") + std::to_string(v[i]);
                        }
                    }
                    else {
                        for (std::size_t i = 0; i < v.size(); ++i) {
                            value += (i ? ", " : "") + v[i];
                        }
                    }
                },
                e->value);
            out += std::string(k.key) + " = " + value + "\n";
        }
    }
    return out;
}

std::string default_config_text()
{
    return R"([cavity]
fsr = 7.90 GHz
fwhm = 287 MHz
curvature_back = 25 mm
refractive_index = 1.453

[beam]
wavelength = 794.9693 nm
cavity_waist = 50 um
source_waist = 25 um

[circuit]
input_modes = -3, -2, -1, 0, 1, 2
shift_fidelity = phase_only
detection = projective_vortex

[sweep]
l_values = 0, 1, -1, 2, -2, 3, -3
span = 7.90 GHz
points = 4000
waists = 25 um, 50 um
)";
}

namespace {

template <class Fn>
auto with_context(const ConfigDocument& doc, const std::string& section, Fn&& fn)
{
    try {
        return fn();
    }
    catch (const InvalidArgument& e) {
        throw ConfigError({{doc.section_location(section), section, e.what()}});
    }
}

int to_int(long long v, const ConfigDocument& doc, const std::string& section, const std::string& key)
{
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        const Entry* e = doc.find(section, key);
        throw ConfigError({{e ? e->location : Location{}, section + "." + key, "integer out of range"}});
    }
    return static_cast<int>(v);
}

}  // namespace

CircuitSpec to_circuit_spec(const ConfigDocument& doc)
{
    CircuitSpec spec;
    spec.cavity = with_context(doc, "cavity", [&] {
        const double fsr = doc.number("cavity", "fsr", 0.0);
        const double fwhm = doc.number("cavity", "fwhm", 0.0);
        CavityParams c = CavityParams::from_fsr_fwhm(fsr, fwhm, doc.number("cavity", "curvature_back", 0.0),
                                                     doc.number("cavity", "refractive_index", 1.453),
                                                     doc.number("cavity", "curvature_front",
                                                                std::numeric_limits<double>::infinity()));
        const double internal = kPi * doc.number("cavity", "internal_loss_fwhm", 0.0);
        if (internal < 0.0 || internal >= kPi * fwhm) {
            throw InvalidArgument("internal_loss_fwhm must lie in [0, fwhm)");
        }
        c.decay_internal = internal;
        c.decay_left = 0.5 * (kPi * fwhm - internal);
        c.decay_right = c.decay_left;
        c.gouy_branch = doc.word("cavity", "gouy_branch", "plus") == "minus" ? GouyBranch::minus : GouyBranch::plus;
        c.validate();
        return c;
    });

    spec.nominal_wavelength = doc.number("beam", "wavelength", spec.nominal_wavelength);
    spec.cavity_waist = doc.number("beam", "cavity_waist", spec.cavity_waist);
    spec.source_waist = doc.number("beam", "source_waist", spec.source_waist);
    spec.detection_waist = doc.number("beam", "detection_waist", spec.source_waist);

    const std::vector<long long> modes = doc.integers("circuit", "input_modes", {-3, -2, -1, 0, 1, 2});
    spec.input_modes.clear();
    for (const long long l : modes) {
        spec.input_modes.push_back(to_int(l, doc, "circuit", "input_modes"));
    }
    const int max_mode = spec.input_modes.empty()
                             ? 0
                             : *std::max_element(spec.input_modes.begin(), spec.input_modes.end());
    spec.target_l = to_int(doc.integer("circuit", "target_l", max_mode + 1), doc, "circuit", "target_l");
    spec.shift_fidelity = doc.word("circuit", "shift_fidelity", "phase_only") == "index_shift"
                              ? ShiftFidelity::index_shift
                              : ShiftFidelity::phase_only;
    spec.detection = doc.word("circuit", "detection", "projective_vortex") == "modal_power"
                         ? DetectionModel::modal_power
                         : DetectionModel::projective_vortex;
    spec.arm_phase = doc.number("circuit", "arm_phase", 0.0);
    spec.mirror_flips_right_arm =
        to_int(doc.integer("circuit", "mirror_flips_right_arm", 3), doc, "circuit", "mirror_flips_right_arm");
    spec.extra_flips_left_arm =
        to_int(doc.integer("circuit", "extra_flips_left_arm", 1), doc, "circuit", "extra_flips_left_arm");
    spec.fp2_frequency_offset = 2.0 * kPi * doc.number("circuit", "fp2_offset", 0.0);
    spec.truncation.p_max = to_int(doc.integer("circuit", "p_max", 10), doc, "circuit", "p_max");
    spec.truncation.l_max = to_int(doc.integer("circuit", "l_max", 6), doc, "circuit", "l_max");

    with_context(doc, "beam", [&] {
        for (const double w : {spec.cavity_waist, spec.source_waist, spec.detection_waist, spec.nominal_wavelength}) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw InvalidArgument("beam wavelength and waists must be positive and finite");
            }
        }
        return 0;
    });
    return with_context(doc, "circuit", [&] {
        spec.validate();
        return tune_to_target(spec);
    });
}

SweepSettings to_sweep_settings(const ConfigDocument& doc, const CircuitSpec& spec)
{
    SweepSettings s;
    for (const long long l : doc.integers("sweep", "l_values", {0, 1, -1, 2, -2, 3, -3})) {
        s.l_values.push_back(to_int(l, doc, "sweep", "l_values"));
    }
    const double fsr_hz = spec.cavity.fsr_angular() / (2.0 * kPi);
    s.span_hz = doc.number("sweep", "span", 2.0 * fsr_hz);
    s.points = to_int(doc.integer("sweep", "points", 4000), doc, "sweep", "points");
    s.waists = doc.numbers("sweep", "waists", {25e-6, 50e-6});
    with_context(doc, "sweep", [&] {
        if (s.points < 3 || !(s.span_hz > 0.0) || s.l_values.empty() || s.waists.empty()) {
            throw InvalidArgument("sweep needs points >= 3, a positive span, l_values and waists");
        }
        for (const int l : s.l_values) {
            if (std::abs(l) > spec.truncation.l_max) {
                throw InvalidArgument("sweep l = " + std::to_string(l) + " exceeds l_max");
            }
        }
        for (const double w : s.waists) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw InvalidArgument("sweep waists must be positive and finite");
            }
        }
        return 0;
    });
    return s;
}

OptimizeSettings to_optimize_settings(const ConfigDocument& doc, const CircuitSpec& spec)
{
    OptimizeSettings s;
    const std::string objective = doc.word("optimize", "objective", "max_avg_efficiency");
    s.objective = objective == "max_min_mode_separation" ? Objective::max_min_mode_separation
                  : objective == "max_target_p0_content" ? Objective::max_target_p0_content
                                                          : Objective::max_avg_efficiency;
    const double wc = spec.cavity_waist;
    const double half_fsr_length = 0.25 * spec.wavelength();
    for (const auto& name : doc.words("optimize", "free", {"source_waist"})) {
        if (name == "source_waist") {
            s.free.push_back({FreeParam::source_waist, doc.number("optimize", "source_waist_min", wc / 4.0),
                              doc.number("optimize", "source_waist_max", wc)});
        }
        else {
            s.free.push_back({FreeParam::optical_length_offset,
                              doc.number("optimize", "length_offset_min", -half_fsr_length),
                              doc.number("optimize", "length_offset_max", half_fsr_length)});
        }
    }
    s.coarse_points = to_int(doc.integer("optimize", "coarse_points", s.coarse_points), doc, "optimize", "coarse_points");
    s.golden_iterations =
        to_int(doc.integer("optimize", "golden_iterations", s.golden_iterations), doc, "optimize", "golden_iterations");
    s.sweeps = to_int(doc.integer("optimize", "sweeps", s.sweeps), doc, "optimize", "sweeps");
    s.separation_p_max =
        to_int(doc.integer("optimize", "separation_p_max", s.separation_p_max), doc, "optimize", "separation_p_max");
    with_context(doc, "optimize", [&] {
        s.validate();
        return 0;
    });
    return s;
}

}  // namespace oamsim::config

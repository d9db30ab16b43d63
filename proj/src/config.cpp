#include "vacrad/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "vacrad/error.hpp"
#include "vacrad/modes.hpp"

namespace vacrad {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view text)
{
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(fmt::format("'{}' is not a finite number", text));
    return v;
}

template <class Int>
Int to_integer(std::string_view text)
{
    text = trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(fmt::format("'{}' is not an integer", text));
    return v;
}

std::optional<double> to_optional_double(std::string_view text)
{
    if (trim(text) == "auto") return std::nullopt;
    return to_double(text);
}

std::optional<cplx> to_optional_complex(std::string_view text)
{
    text = trim(text);
    if (text == "auto") return std::nullopt;
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) return cplx{to_double(text), 0.0};
    return cplx{to_double(text.substr(0, comma)), to_double(text.substr(comma + 1))};
}

std::string num(double v) { return fmt::format("{}", v); }
std::string num(std::optional<double> v) { return v ? num(*v) : "auto"; }
std::string num(std::optional<cplx> v)
{
    return v ? fmt::format("{},{}", v->real(), v->imag()) : "auto";
}

template <class E, class Parse>
E enum_value(std::string_view text, Parse parse)
{
    try {
        return parse(trim(text));
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

struct Key {
    std::string_view section;
    std::string_view name;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define VACRAD_NUM_KEY(sec, field)                                                           \
    Key{#sec, #field, [](RunConfig& c, std::string_view v) { c.sec.field = to_double(v); }, \
        [](const RunConfig& c) { return num(c.sec.field); }}
#define VACRAD_INT_KEY(sec, field, type)                                                          \
    Key{#sec, #field, [](RunConfig& c, std::string_view v) { c.sec.field = to_integer<type>(v); }, \
        [](const RunConfig& c) { return fmt::format("{}", c.sec.field); }}

const std::vector<Key>& keys()
{
    static const std::vector<Key> table{
        Key{"profile", "kind",
            [](RunConfig& c, std::string_view v) {
                c.profile.kind = enum_value<ProfileKind>(v, parse_profile_kind);
            },
            [](const RunConfig& c) { return std::string(to_string(c.profile.kind)); }},
        VACRAD_NUM_KEY(profile, epsilon_initial),
        VACRAD_NUM_KEY(profile, epsilon_final),
        VACRAD_NUM_KEY(profile, t0),
        VACRAD_NUM_KEY(profile, tau),
        Key{"profile", "table", [](RunConfig& c, std::string_view v) { c.profile.table = trim(v); },
            [](const RunConfig& c) { return c.profile.table; }},
        VACRAD_INT_KEY(profile, plot_points, int),

        VACRAD_NUM_KEY(grid, k_min),
        VACRAD_NUM_KEY(grid, k_max),
        VACRAD_INT_KEY(grid, points, int),
        Key{"grid", "spacing",
            [](RunConfig& c, std::string_view v) {
                c.grid.spacing = enum_value<GridSpacing>(v, parse_grid_spacing);
            },
            [](const RunConfig& c) { return std::string(to_string(c.grid.spacing)); }},

        VACRAD_NUM_KEY(solver, rel_tol),
        VACRAD_NUM_KEY(solver, k),
        Key{"solver", "t_start",
            [](RunConfig& c, std::string_view v) { c.solver.t_start = to_optional_double(v); },
            [](const RunConfig& c) { return num(c.solver.t_start); }},
        Key{"solver", "t_end",
            [](RunConfig& c, std::string_view v) { c.solver.t_end = to_optional_double(v); },
            [](const RunConfig& c) { return num(c.solver.t_end); }},

        VACRAD_INT_KEY(fock, cutoff, int),
        VACRAD_NUM_KEY(fock, gamma_calibration),

        VACRAD_NUM_KEY(radiation, coupling),
        VACRAD_NUM_KEY(radiation, coupling_phase),
        Key{"radiation", "gamma",
            [](RunConfig& c, std::string_view v) { c.radiation.gamma = to_optional_complex(v); },
            [](const RunConfig& c) { return num(c.radiation.gamma); }},
        Key{"radiation", "layout",
            [](RunConfig& c, std::string_view v) {
                c.radiation.layout = enum_value<PairLayout>(v, parse_pair_layout);
            },
            [](const RunConfig& c) { return std::string(to_string(c.radiation.layout)); }},
        VACRAD_INT_KEY(radiation, max_pairs, int),
        VACRAD_INT_KEY(radiation, events, std::uint64_t),
        VACRAD_INT_KEY(radiation, seed, std::uint64_t),

        VACRAD_NUM_KEY(spectrum, volume),
        VACRAD_NUM_KEY(spectrum, ev_per_unit),
        VACRAD_NUM_KEY(spectrum, band_lo),
        VACRAD_NUM_KEY(spectrum, band_hi),

        Key{"output", "directory",
            [](RunConfig& c, std::string_view v) { c.output.directory = trim(v); },
            [](const RunConfig& c) { return c.output.directory; }},
    };
    return table;
}

#undef VACRAD_NUM_KEY
#undef VACRAD_INT_KEY

const Key* find_key(std::string_view section, std::string_view name)
{
    for (const auto& k : keys())
        if (k.section == section && k.name == name) return &k;
    return nullptr;
}

bool known_section(std::string_view section)
{
    for (const auto& k : keys())
        if (k.section == section) return true;
    return false;
}

void set_value(RunConfig& config, const Key& key, std::string_view value, std::string_view where)
{
    try {
        key.set(config, value);
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}.{}: {}", where, key.section, key.name, e.what()));
    }
}

}  // namespace

PairLayout parse_pair_layout(std::string_view text)
{
    if (text == "pair") return PairLayout::pair;
    if (text == "compact") return PairLayout::compact;
    throw ConfigError(fmt::format("unknown pair layout '{}' (pair, compact)", text));
}

std::string_view to_string(PairLayout layout) { return layout == PairLayout::compact ? "compact" : "pair"; }

RunConfig parse_config(std::string_view text, std::string_view source)
{
    RunConfig config;
    std::string section;
    std::set<std::string, std::less<>> seen;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        const auto raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        const auto where = fmt::format("{}:{}", source, lineno);

        auto line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(fmt::format("{}: unterminated section header", where));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && !known_section(section))
                throw ConfigError(fmt::format("{}: unknown section [{}]", where, section));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("{}: expected 'key = value'", where));
        if (section.empty()) throw ConfigError(fmt::format("{}: key outside of any section", where));
        if (section == "run") continue;
        const auto name = trim(line.substr(0, eq));
        const auto* key = find_key(section, name);
        if (!key) throw ConfigError(fmt::format("{}: unknown key '{}' in [{}]", where, name, section));
        const auto full = fmt::format("{}.{}", section, name);
        if (!seen.insert(full).second) throw ConfigError(fmt::format("{}: duplicate key {}", where, full));
        set_value(config, *key, line.substr(eq + 1), where);
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

void apply_override(RunConfig& config, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    const auto lhs = trim(assignment.substr(0, eq));
    const auto dot = lhs.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos)
        throw ConfigError(fmt::format("override '{}' is not of the form section.key=value", assignment));
    const auto* key = find_key(lhs.substr(0, dot), lhs.substr(dot + 1));
    if (!key) throw ConfigError(fmt::format("unknown config key '{}'", lhs));
    set_value(config, *key, assignment.substr(eq + 1), "--set");
}

void validate(const RunConfig& c)
{
    auto fail = [](std::string_view format, auto&&... args) {
        throw ConfigError(fmt::vformat(format, fmt::make_format_args(args...)));
    };
    if (!(c.profile.epsilon_initial >= 1.0) || !(c.profile.epsilon_final >= 1.0))
        fail("profile.epsilon_initial and profile.epsilon_final must be >= 1");
    if (c.profile.kind == ProfileKind::tanh && !(c.profile.tau > 0.0)) fail("profile.tau must be > 0");
    if (c.profile.kind == ProfileKind::tabulated && c.profile.table.empty())
        fail("profile.table is required for a tabulated profile");
    if (c.profile.plot_points < 2) fail("profile.plot_points must be >= 2");
    if (!(c.grid.k_min > 0.0) || !(c.grid.k_max >= c.grid.k_min))
        fail("grid needs 0 < k_min <= k_max");
    if (c.grid.points < 1) fail("grid.points must be >= 1");
    if (!(c.solver.rel_tol >= min_rel_tol && c.solver.rel_tol <= max_rel_tol))
        fail("solver.rel_tol = {:g} outside [{:g}, {:g}]", c.solver.rel_tol, min_rel_tol, max_rel_tol);
    if (!(c.solver.k > 0.0)) fail("solver.k must be > 0");
    if (c.solver.t_start && c.solver.t_end && !(*c.solver.t_end > *c.solver.t_start))
        fail("solver.t_end must exceed solver.t_start");
    if (c.fock.cutoff < 1) fail("fock.cutoff must be >= 1");
    if (!(c.fock.gamma_calibration > 0.0)) fail("fock.gamma_calibration must be > 0");
    if (!(c.radiation.coupling > 0.0 && c.radiation.coupling <= max_coupling))
        fail("radiation.coupling must lie in (0, {}]", max_coupling);
    if (c.radiation.gamma && !(std::abs(*c.radiation.gamma) < 1.0)) fail("|radiation.gamma| must be < 1");
    if (c.radiation.max_pairs < 1) fail("radiation.max_pairs must be >= 1");
    if (c.radiation.events < 10000) fail("radiation.events must be >= 10000");
    if (!(c.spectrum.volume > 0.0)) fail("spectrum.volume must be > 0");
    if (!(c.spectrum.ev_per_unit > 0.0)) fail("spectrum.ev_per_unit must be > 0");
    if (!(c.spectrum.band_lo < c.spectrum.band_hi)) fail("spectrum.band_lo must be < spectrum.band_hi");
}

std::string emit_config(const RunConfig& config)
{
    std::string out;
    std::string_view section;
    for (const auto& k : keys()) {
        if (k.section != section) {
            if (!section.empty()) out += '\n';
            section = k.section;
            out += fmt::format("[{}]\n", section);
        }
        out += fmt::format("{} = {}\n", k.name, k.get(config));
    }
    return out;
}

}  // namespace vacrad

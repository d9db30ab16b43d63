#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "vacrad/profiles.hpp"
#include "vacrad/radiation.hpp"
#include "vacrad/spectrum.hpp"

namespace vacrad {

/// Run configuration. Every field has a default; see README for the grammar
/// and the meaning of each key.
struct RunConfig {
    struct Profile {
        ProfileKind kind = ProfileKind::tanh;
        double epsilon_initial = 1.0;
        double epsilon_final = 1.69;
        double t0 = 0.0;
        double tau = 1.0;
        std::string table;     ///< two-column file, tabulated kind only
        int plot_points = 401; ///< rows written by the `profile` subcommand
        bool operator==(const Profile&) const = default;
    } profile;

    struct Grid {
        double k_min = 0.1;
        double k_max = 10.0;
        int points = 50;
        GridSpacing spacing = GridSpacing::linear;
        bool operator==(const Grid&) const = default;
    } grid;

    struct Solver {
        double rel_tol = 1e-10;
        double k = 1.0;                ///< wavenumber for single-mode subcommands
        std::optional<double> t_start; ///< unset: edge of the asymptotic window
        std::optional<double> t_end;
        bool operator==(const Solver&) const = default;
    } solver;

    struct Fock {
        int cutoff = 30;
        double gamma_calibration = 0.5;
        bool operator==(const Fock&) const = default;
    } fock;

    struct Radiation {
        double coupling = 0.3;        ///< |J|
        double coupling_phase = 0.0;  ///< arg J in radians
        std::optional<cplx> gamma;    ///< unset: conj(beta/alpha) of mode solver.k
        PairLayout layout = PairLayout::pair;
        int max_pairs = 5;
        std::uint64_t events = 100000;
        std::uint64_t seed = 1;
        bool operator==(const Radiation&) const = default;
    } radiation;

    struct Spectrum {
        double volume = 1.0;
        double ev_per_unit = 1.0;
        double band_lo = 3.0;
        double band_hi = 4.0;
        bool operator==(const Spectrum&) const = default;
    } spectrum;

    struct Output {
        std::string directory;  ///< empty: $VACRAD_OUTPUT_DIR, else ./vacrad-out
        bool operator==(const Output&) const = default;
    } output;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the flat `[section]` / `key = value` format on top of the defaults.
/// A `[run]` section (as written into manifests) is ignored, so a manifest can
/// be fed back as a config. Throws ConfigError with a line number.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Applies one `section.key=value` override.
void apply_override(RunConfig& config, std::string_view assignment);

/// Range checks that do not depend on the subcommand. Throws ConfigError.
void validate(const RunConfig& config);

/// Canonical form: every key in a fixed order, doubles printed as the
/// shortest text that reads back to the same value. parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

PairLayout parse_pair_layout(std::string_view text);
std::string_view to_string(PairLayout layout);

}  // namespace vacrad

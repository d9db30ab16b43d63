#include "vacrad/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vacrad/error.hpp"
#include "vacrad/modes.hpp"
#include "vacrad/parallel.hpp"

namespace vacrad {

GridSpacing parse_grid_spacing(std::string_view text)
{
    if (text == "linear") return GridSpacing::linear;
    if (text == "log") return GridSpacing::log;
    throw DomainError(fmt::format("unknown grid spacing '{}'", text));
}

std::string_view to_string(GridSpacing spacing)
{
    return spacing == GridSpacing::log ? "log" : "linear";
}

std::vector<double> make_k_grid(double k_min, double k_max, int points, GridSpacing spacing)
{
    if (!(k_min > 0.0) || !(k_max >= k_min))
        throw DomainError(fmt::format("need 0 < k_min <= k_max, got [{}, {}]", k_min, k_max));
    if (points < 1) throw DomainError("grid needs at least one point");
    if (points == 1) return {k_min};
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double x = static_cast<double>(i) / (points - 1);
        grid[static_cast<std::size_t>(i)] = spacing == GridSpacing::log
                                                ? k_min * std::pow(k_max / k_min, x)
                                                : k_min + (k_max - k_min) * x;
    }
    grid.back() = k_max;
    return grid;
}

SpectrumTable build_spectrum(const DielectricProfile& profile, std::span<const double> k_grid,
                             double rel_tol, double volume, int workers)
{
    if (k_grid.empty()) throw DomainError("empty k grid");
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > 0.0)) throw DomainError("k grid must be positive");
        if (i > 0 && !(k_grid[i] > k_grid[i - 1])) throw DomainError("k grid must be ascending");
    }
    if (!(volume > 0.0)) throw DomainError("quantization volume must be positive");

    SpectrumTable table;
    table.volume = volume;
    table.k_max = k_grid.back();
    table.epsilon_final = profile.epsilon_final();
    table.profile_kind = profile.kind();
    table.rows.resize(k_grid.size());

    // Trapezoid weights on the (possibly non-uniform) grid.
    const std::size_t n = k_grid.size();
    auto dk = [&](std::size_t i) {
        if (n == 1) return 1.0;
        const double left = i > 0 ? k_grid[i] - k_grid[i - 1] : 0.0;
        const double right = i + 1 < n ? k_grid[i + 1] - k_grid[i] : 0.0;
        return 0.5 * (left + right);
    };
    const double density = volume / (2.0 * std::numbers::pi * std::numbers::pi);
    const double dk_domega = std::sqrt(profile.epsilon_final());

    parallel_for(n, workers, [&](std::size_t i) {
        auto& row = table.rows[i];
        const double k = k_grid[i];
        row.k = k;
        row.omega_out = dispersion_omega(k, profile.epsilon_final());
        row.mode_weight = k * k * density * dk(i);
        try {
            const auto pair = extract(evolve_mode(k, profile, rel_tol), profile);
            row.occupation = pair.occupation();
            row.normalization_residual = pair.normalization_residual();
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
            return;
        }
        row.dn_domega = polarization_degeneracy * row.occupation * k * k * density * dk_domega;
        row.energy = polarization_degeneracy * row.omega_out * row.occupation * row.mode_weight;
    });
    return table;
}

EnergyEstimate total_energy(const SpectrumTable& table, double k_max)
{
    if (table.rows.empty()) throw DomainError("total_energy: empty spectrum table");
    EnergyEstimate e;
    int failed = 0;
    for (const auto& row : table.rows) {
        if (row.k > k_max) break;
        e.k_max = row.k;
        if (!row.ok) {
            ++failed;
            continue;
        }
        e.energy += row.energy;
    }
    bool flat = false;
    if (table.profile_kind == ProfileKind::step) {
        for (const auto& row : table.rows)
            if (row.ok && row.occupation > 0.0) flat = true;
    }
    if (flat)
        e.warning = fmt::format("step profile: flat spectrum, energy diverges with k_max "
                                "(value reported for k_max = {})",
                                e.k_max);
    if (failed > 0)
        e.warning += fmt::format("{}{} row(s) failed and were excluded", e.warning.empty() ? "" : "; ",
                                 failed);
    return e;
}

BandFraction band_fraction(const SpectrumTable& table, double omega_lo, double omega_hi,
                           double ev_per_unit)
{
    if (!(omega_lo < omega_hi)) throw DomainError("band needs omega_lo < omega_hi");
    if (!(ev_per_unit > 0.0)) throw DomainError("unit scale must be positive");
    BandFraction b;
    double total = 0.0, inside = 0.0;
    int rows_in_band = 0;
    for (const auto& row : table.rows) {
        if (!row.ok) continue;
        total += row.energy;
        const double w = row.omega_out * ev_per_unit;
        if (w >= omega_lo && w <= omega_hi) {
            inside += row.energy;
            ++rows_in_band;
        }
    }
    if (rows_in_band == 0) {
        b.warning = fmt::format("no grid point falls in the band [{}, {}]", omega_lo, omega_hi);
        return b;
    }
    if (!(total > 0.0)) {
        b.warning = "spectrum carries no energy";
        return b;
    }
    b.fraction = inside / total;
    return b;
}

void write_spectrum_csv(std::ostream& out, const SpectrumTable& table, double ev_per_unit)
{
    out << "k,omega,N_k,dN_domega,dE,status\n";
    for (const auto& row : table.rows)
        fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", row.k,
                   row.omega_out * ev_per_unit, row.occupation, row.dn_domega, row.energy,
                   row.ok ? "ok" : "failed");
}

}  // namespace vacrad

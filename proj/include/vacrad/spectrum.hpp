#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vacrad/bogolubov.hpp"
#include "vacrad/profiles.hpp"

namespace vacrad {

enum class GridSpacing { linear, log };

GridSpacing parse_grid_spacing(std::string_view text);
std::string_view to_string(GridSpacing spacing);

/// `points` wavenumbers from k_min to k_max inclusive.
std::vector<double> make_k_grid(double k_min, double k_max, int points, GridSpacing spacing);

struct SpectrumRow {
    double k = 0.0;
    double omega_out = 0.0;
    double occupation = 0.0;    ///< N_k = |beta_k|^2 per polarization
    double dn_domega = 0.0;     ///< photons per unit omega, both transverse polarizations
    double mode_weight = 0.0;   ///< k^2 L^3 / (2 pi^2) * dk for this grid point
    double energy = 0.0;        ///< 2 omega_out N_k mode_weight
    double normalization_residual = 0.0;
    bool ok = true;
    std::string error;          ///< diagnostic of a failed row
};

struct SpectrumTable {
    std::vector<SpectrumRow> rows;  ///< sorted by k
    double volume = 1.0;            ///< L^3
    double k_max = 0.0;
    double epsilon_final = 1.0;
    ProfileKind profile_kind = ProfileKind::tanh;
};

/// Number of transverse polarizations per wavevector.
inline constexpr double polarization_degeneracy = 2.0;

/// Bogolubov occupation per grid point. Rows are computed in parallel;
/// failures are recorded on the row instead of aborting the sweep.
SpectrumTable build_spectrum(const DielectricProfile& profile, std::span<const double> k_grid,
                             double rel_tol, double volume = 1.0, int workers = 1);

struct EnergyEstimate {
    double energy = 0.0;
    double k_max = 0.0;   ///< largest k included
    std::string warning;  ///< non-empty for a divergent (flat) spectrum or failed rows
};

/// Sum of the per-row energies for k <= k_max, in table order.
EnergyEstimate total_energy(const SpectrumTable& table,
                            double k_max = std::numeric_limits<double>::infinity());

struct BandFraction {
    double fraction = 0.0;
    std::string warning;
};

/// Fraction of the radiated energy with ev_per_unit * omega_out in
/// [omega_lo, omega_hi]; with ev_per_unit = 1 the band is in natural units.
BandFraction band_fraction(const SpectrumTable& table, double omega_lo, double omega_hi,
                           double ev_per_unit = 1.0);

/// Columns: k, omega, N_k, dN_domega, dE, status.
void write_spectrum_csv(std::ostream& out, const SpectrumTable& table, double ev_per_unit = 1.0);

}  // namespace vacrad

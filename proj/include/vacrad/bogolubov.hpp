#pragma once

#include <complex>
#include <iosfwd>
#include <span>

#include "vacrad/modes.hpp"
#include "vacrad/profiles.hpp"

namespace vacrad {

/// Diagonal Bogolubov coefficients of one wavenumber: the evolved in-mode
/// equals alpha * u_out + beta * conj(u_out) in the out-region. A homogeneous
/// eps(t) never mixes wavenumbers or polarizations.
struct BogolubovPair {
    double k = 1.0;
    double omega_in = 1.0;
    double omega_out = 1.0;
    cplx alpha{1.0, 0.0};
    cplx beta{0.0, 0.0};

    /// |alpha|^2 - |beta|^2 - 1
    double normalization_residual() const { return std::norm(alpha) - std::norm(beta) - 1.0; }
    /// Mean number of quanta produced per mode, |beta|^2.
    double occupation() const { return std::norm(beta); }
};

inline constexpr double extraction_residual_limit = 1e-6;

/// Projects the final state of `solution` onto the out-region basis
/// u_out = (2 eps_f omega_out)^(-1/2) exp(-i omega_out (t - t0)):
/// alpha = C(u_out, f), beta = -C(conj(u_out), f).
BogolubovPair extract(const ModeSolution& solution, const DielectricProfile& profile);

/// Closed form for an instantaneous jump eps_i -> eps_f with f and eps*fdot
/// continuous: r = sqrt(eps_f/eps_i), alpha = (sqrt r + 1/sqrt r)/2,
/// beta = (sqrt r - 1/sqrt r)/2.
BogolubovPair sudden_coefficients(double epsilon_initial, double epsilon_final, double k);

/// gamma = conj(beta / alpha), the pair amplitude of the squeezed in-vacuum.
cplx gamma_ratio(const BogolubovPair& pair);

/// Gamma = -conj(beta) / alpha, the exponent coefficient of the unphysical
/// (scalar/longitudinal) coherent sector as written in the source model.
cplx coherent_ratio(const BogolubovPair& pair);

/// Header plus one row per pair: k, omega_in, omega_out, re_alpha, im_alpha,
/// re_beta, im_beta, beta_sq, normalization_residual.
void write_bogolubov_csv(std::ostream& out, std::span<const BogolubovPair> pairs);

}  // namespace vacrad

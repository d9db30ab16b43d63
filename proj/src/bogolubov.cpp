#include "vacrad/bogolubov.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vacrad/error.hpp"

namespace vacrad {

BogolubovPair extract(const ModeSolution& solution, const DielectricProfile& profile)
{
    if (solution.trajectory.empty()) throw UsageError("extract: empty mode solution");
    const ModeState& f = solution.final();
    const double eps_f = profile.epsilon_final();
    const double eps_end = profile.evaluate(f.t);
    if (std::abs(eps_end - eps_f) >= asymptotic_threshold)
        throw PreconditionError(
            fmt::format("extract: solution ends at t = {} outside the out-region", f.t));

    const ModeState u = plane_wave(f.k, eps_f, f.t, profile.t0());
    BogolubovPair pair;
    pair.k = f.k;
    pair.omega_in = dispersion_omega(f.k, profile.epsilon_initial());
    pair.omega_out = dispersion_omega(f.k, eps_f);
    pair.alpha = conserved_current(u, f, eps_f);
    pair.beta = -conserved_current(conjugate(u), f, eps_f);

    const double residual = std::abs(pair.normalization_residual());
    if (residual > extraction_residual_limit)
        throw NumericalFailure(fmt::format(
            "extract k={}: |alpha|^2 - |beta|^2 - 1 = {:.3e} exceeds {:.0e}; tighten rel_tol",
            f.k, residual, extraction_residual_limit));
    return pair;
}

BogolubovPair sudden_coefficients(double epsilon_initial, double epsilon_final, double k)
{
    BogolubovPair pair;
    pair.k = k;
    pair.omega_in = dispersion_omega(k, epsilon_initial);
    pair.omega_out = dispersion_omega(k, epsilon_final);
    const double root_r = std::pow(epsilon_final / epsilon_initial, 0.25);
    pair.alpha = 0.5 * (root_r + 1.0 / root_r);
    pair.beta = 0.5 * (root_r - 1.0 / root_r);
    return pair;
}

cplx gamma_ratio(const BogolubovPair& pair)
{
    if (pair.alpha == cplx{}) throw DomainError("gamma_ratio: alpha vanishes");
    return std::conj(pair.beta / pair.alpha);
}

cplx coherent_ratio(const BogolubovPair& pair)
{
    if (pair.alpha == cplx{}) throw DomainError("coherent_ratio: alpha vanishes");
    return -std::conj(pair.beta) / pair.alpha;
}

void write_bogolubov_csv(std::ostream& out, std::span<const BogolubovPair> pairs)
{
    out << "k,omega_in,omega_out,re_alpha,im_alpha,re_beta,im_beta,beta_sq,normalization_residual\n";
    for (const auto& p : pairs)
        fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                   p.k, p.omega_in, p.omega_out, p.alpha.real(), p.alpha.imag(), p.beta.real(),
                   p.beta.imag(), p.occupation(), p.normalization_residual());
}

}  // namespace vacrad

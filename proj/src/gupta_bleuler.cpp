#include "vacrad/gupta_bleuler.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vacrad/error.hpp"

namespace vacrad {

std::string_view to_string(ConstraintId id)
{
    switch (id) {
    case ConstraintId::eq16: return "eq16";
    case ConstraintId::eq19_21: return "eq19_21";
    case ConstraintId::eq20: return "eq20";
    case ConstraintId::eq24: return "eq24";
    }
    return "unknown";
}

namespace {

ConstraintReport measure(ConstraintId id, std::string mode, const FockState& residual)
{
    ConstraintReport r;
    r.id = id;
    r.mode = std::move(mode);
    r.residual_indefinite_norm = indefinite_norm_sq(residual);
    r.residual_positive_norm = std::sqrt(residual.interior().positive_norm_sq());
    return r;
}

bool zero_norm(const ConstraintReport& r)
{
    return std::abs(r.residual_indefinite_norm) < indefinite_pass_tolerance;
}

bool vanishes(const ConstraintReport& r)
{
    return zero_norm(r) && r.residual_positive_norm < positive_pass_tolerance;
}

FockState bogolubov_combination(const FockState& state, cplx alpha, cplx beta,
                                std::string_view mode)
{
    return apply_annihilation(state, mode) * alpha + apply_creation(state, mode) * std::conj(beta);
}

}  // namespace

FockState build_unphysical_state(std::span<const UnphysicalPair> pairs, const ModeRegistry& registry)
{
    std::vector<PairCreationTerm> terms;
    for (const auto& p : pairs) {
        const auto& l = registry[registry.index_of(p.longitudinal)];
        const auto& s = registry[registry.index_of(p.scalar)];
        if (l.polarization != Polarization::longitudinal || s.polarization != Polarization::scalar)
            throw UsageError(fmt::format("unphysical pair ('{}', '{}') must be (longitudinal, scalar)",
                                         p.longitudinal, p.scalar));
        if (!(2.0 * std::abs(p.coherent) < 1.0))
            throw DomainError(fmt::format(
                "coherent coefficient |2 Gamma| = {} is not < 1: state is not normalizable",
                2.0 * std::abs(p.coherent)));
        terms.push_back({p.longitudinal, p.longitudinal, p.coherent});
        terms.push_back({p.scalar, p.scalar, -p.coherent});
    }
    const auto state = exp_pair_creation(FockState::vacuum(registry), terms);
    return state.normalized();
}

cplx calibrated_coherent_ratio(const BogolubovPair& pair, double calibration)
{
    return calibration * coherent_ratio(pair);
}

ConstraintReport check_per_mode_constraint(const FockState& state, cplx alpha, cplx beta,
                                           std::string_view mode)
{
    auto r = measure(ConstraintId::eq19_21, std::string(mode),
                     bogolubov_combination(state, alpha, beta, mode));
    r.parameters.alpha = alpha;
    r.parameters.beta = beta;
    r.pass = vanishes(r);
    return r;
}

ConstraintReport check_aggregate_constraint(const FockState& state,
                                            std::span<const ModeCoefficients> modes)
{
    FockState sum(state.registry());
    std::string label;
    for (const auto& m : modes) {
        sum = sum + bogolubov_combination(state, m.alpha, m.beta, m.mode);
        label += label.empty() ? m.mode : "+" + m.mode;
    }
    auto r = measure(ConstraintId::eq19_21, label, sum);
    if (!modes.empty()) {
        r.parameters.alpha = modes.front().alpha;
        r.parameters.beta = modes.front().beta;
    }
    r.pass = vanishes(r);
    return r;
}

ConstraintReport check_out_annihilation(const FockState& state, cplx alpha, cplx beta,
                                        double epsilon_final, std::string_view mode)
{
    if (!(epsilon_final >= 1.0)) throw DomainError("epsilon_final must be >= 1");
    const double prefactor = 1.0 - std::sqrt(epsilon_final);
    const auto unscaled = bogolubov_combination(state, alpha, beta, mode);
    auto r = measure(ConstraintId::eq20, std::string(mode), unscaled * prefactor);
    r.parameters = {epsilon_final, alpha, beta, {}};
    if (prefactor == 0.0) {
        r.pass = true;
    } else {
        r.pass = vanishes(measure(ConstraintId::eq19_21, std::string(mode), unscaled));
    }
    return r;
}

ConstraintReport check_creation_constraint(const FockState& state, std::string_view longitudinal,
                                           std::string_view scalar)
{
    const auto residual = apply_creation(state, longitudinal) - apply_creation(state, scalar);
    auto r = measure(ConstraintId::eq24, fmt::format("{}-{}", longitudinal, scalar), residual);
    r.pass = zero_norm(r);
    return r;
}

ConstraintReport check_lorentz_condition(const FockState& state, std::string_view longitudinal,
                                         std::string_view scalar)
{
    const auto residual =
        apply_annihilation(state, longitudinal) - apply_annihilation(state, scalar);
    auto r = measure(ConstraintId::eq16, fmt::format("{}-{}", longitudinal, scalar), residual);
    r.pass = zero_norm(r);
    return r;
}

void write_constraint_header(std::ostream& out)
{
    out << "constraint_id,mode,epsilon_final,re_alpha,im_alpha,re_beta,im_beta,re_gamma,im_gamma,"
           "residual_indefinite_norm,residual_positive_norm,status\n";
}

void write_constraint_row(std::ostream& out, const ConstraintReport& r)
{
    const auto& p = r.parameters;
    fmt::print(out, "{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.6e},{:.6e},{}\n",
               to_string(r.id), r.mode, p.epsilon_final, p.alpha.real(), p.alpha.imag(),
               p.beta.real(), p.beta.imag(), p.coherent.real(), p.coherent.imag(),
               r.residual_indefinite_norm, r.residual_positive_norm, r.pass ? "PASS" : "FAIL");
}

}  // namespace vacrad

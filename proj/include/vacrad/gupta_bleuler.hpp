#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "vacrad/bogolubov.hpp"
#include "vacrad/fock.hpp"

namespace vacrad {

/// Which constraint of the covariant quantization a report refers to.
///   eq16    in-region Lorentz condition (a_3 - a_0)|Psi>
///   eq19_21 per-mode (alpha a + beta* a+)|Psi>, or its sum over modes
///   eq20    (1 - sqrt(eps_f)) (alpha a + beta* a+)|Psi>
///   eq24    (a+_3 - a+_0)|Psi>
enum class ConstraintId { eq16, eq19_21, eq20, eq24 };

std::string_view to_string(ConstraintId id);

inline constexpr double indefinite_pass_tolerance = 1e-10;
inline constexpr double positive_pass_tolerance = 1e-8;

/// Default factor between the exponent coefficient of the coherent state
/// exp(Gamma (a+_3^2 - a+_0^2)) that solves the per-mode constraint and
/// -beta*/alpha: squaring the creation operator doubles the derivative.
inline constexpr double default_gamma_calibration = 0.5;

struct ConstraintParameters {
    double epsilon_final = 1.0;
    cplx alpha{1.0, 0.0};
    cplx beta{};
    cplx coherent{};  ///< Gamma used to build the state, if known
};

/// Residual r of a constraint applied to a state. The indefinite value is the
/// signed <r|eta|r>; the positive value is the ordinary norm ||r|| restricted
/// to tuples below the cutoff. Constraints hold as zero-norm statements.
struct ConstraintReport {
    ConstraintId id = ConstraintId::eq16;
    std::string mode;
    double residual_indefinite_norm = 0.0;
    double residual_positive_norm = 0.0;
    ConstraintParameters parameters;
    bool pass = false;
};

struct UnphysicalPair {
    std::string longitudinal;  ///< lambda = 3, metric +1
    std::string scalar;        ///< lambda = 0, metric -1
    cplx coherent;             ///< Gamma
};

/// N exp(sum Gamma (a+_3 a+_3 - a+_0 a+_0)) |0;in>, normalized in the positive
/// metric. Requires |2 Gamma| < 1.
FockState build_unphysical_state(std::span<const UnphysicalPair> pairs, const ModeRegistry& registry);

/// calibration * (-beta*/alpha). With the default calibration the resulting
/// coherent state satisfies the per-mode constraint exactly.
cplx calibrated_coherent_ratio(const BogolubovPair& pair,
                               double calibration = default_gamma_calibration);

ConstraintReport check_per_mode_constraint(const FockState& state, cplx alpha, cplx beta,
                                           std::string_view mode);

struct ModeCoefficients {
    std::string mode;
    cplx alpha;
    cplx beta;
};

/// Sum over modes of (alpha_j a_j + beta_j* a+_j)|Psi>, the form before the
/// per-mode split.
ConstraintReport check_aggregate_constraint(const FockState& state,
                                            std::span<const ModeCoefficients> modes);

ConstraintReport check_out_annihilation(const FockState& state, cplx alpha, cplx beta,
                                        double epsilon_final, std::string_view mode);

ConstraintReport check_creation_constraint(const FockState& state, std::string_view longitudinal,
                                           std::string_view scalar);

ConstraintReport check_lorentz_condition(const FockState& state, std::string_view longitudinal,
                                         std::string_view scalar);

/// Columns: constraint_id, mode, epsilon_final, re/im alpha, re/im beta,
/// re/im gamma, residual_indefinite_norm, residual_positive_norm, status.
void write_constraint_header(std::ostream& out);
void write_constraint_row(std::ostream& out, const ConstraintReport& report);

}  // namespace vacrad

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vacrad {

using cplx = std::complex<double>;

/// Photon polarization classes of the covariant (Gupta-Bleuler) treatment.
/// Only the scalar polarization carries negative norm.
enum class Polarization { transverse, scalar, longitudinal };

std::string_view to_string(Polarization p);

struct ModeSpec {
    std::string label;
    Polarization polarization = Polarization::transverse;
    int cutoff = 1;  ///< largest occupation kept, n <= cutoff

    int metric_sign() const noexcept { return polarization == Polarization::scalar ? -1 : +1; }
};

/// Ordered, immutable set of modes spanning a truncated product Fock space.
/// Copies share storage.
class ModeRegistry {
public:
    ModeRegistry() = default;
    explicit ModeRegistry(std::vector<ModeSpec> modes);

    std::size_t size() const noexcept { return data_ ? data_->modes.size() : 0; }
    const ModeSpec& operator[](std::size_t i) const { return data_->modes[i]; }
    const std::vector<ModeSpec>& modes() const;

    /// Throws UsageError for unknown labels.
    std::size_t index_of(std::string_view label) const;
    bool contains(std::string_view label) const noexcept;

    /// Number of amplitudes, prod (cutoff_m + 1).
    std::size_t dimension() const noexcept { return data_ ? data_->dimension : 1; }
    std::size_t stride(std::size_t mode) const { return data_->strides[mode]; }

    int occupation(std::size_t index, std::size_t mode) const
    {
        return static_cast<int>((index / data_->strides[mode]) %
                                static_cast<std::size_t>(data_->modes[mode].cutoff + 1));
    }
    std::vector<int> occupations(std::size_t index) const;
    std::size_t index_of_occupations(std::span<const int> occupations) const;

    /// prod_m metric_sign_m^(n_m) of a basis tuple.
    int metric(std::size_t index) const;

    friend bool operator==(const ModeRegistry& a, const ModeRegistry& b);

private:
    struct Data {
        std::vector<ModeSpec> modes;
        std::vector<std::size_t> strides;
        std::size_t dimension = 1;
    };
    std::shared_ptr<const Data> data_;
};

/// Amplitude vector over occupation tuples of a registry. Immutable; every
/// operation returns a new state.
///
/// `leakage` accumulates the (positive-metric) probability mass that
/// operations dropped at the cutoff, relative to the norm of the state they
/// acted on. It is an error budget, not part of the vector.
class FockState {
public:
    explicit FockState(ModeRegistry registry);
    FockState(ModeRegistry registry, std::vector<cplx> amplitudes, double leakage = 0.0);

    static FockState vacuum(ModeRegistry registry);
    static FockState basis(ModeRegistry registry, std::span<const int> occupations);

    const ModeRegistry& registry() const noexcept { return registry_; }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    cplx amplitude(std::span<const int> occupations) const;
    double leakage() const noexcept { return leakage_; }

    /// sum |c|^2 with the ordinary (positive) metric.
    double positive_norm_sq() const;
    /// Probability mass on tuples with some n_m == cutoff_m.
    double boundary_mass() const;
    /// Copy with the boundary layer zeroed.
    FockState interior() const;

    FockState normalized() const;
    FockState with_leakage(double leakage) const;

    FockState operator+(const FockState& other) const;
    FockState operator-(const FockState& other) const;
    FockState operator*(cplx scale) const;

private:
    ModeRegistry registry_;
    std::vector<cplx> amps_;
    double leakage_ = 0.0;
};

inline FockState operator*(cplx scale, const FockState& s) { return s * scale; }

inline constexpr double leakage_budget = 1e-10;
inline constexpr double series_term_tolerance = 1e-16;

/// a^dagger |n> = sqrt(n+1) |n+1>; the component at the cutoff is dropped and
/// its mass added to the leakage.
FockState apply_creation(const FockState& state, std::string_view mode);

/// a |n> = metric_sign sqrt(n) |n-1>, so that [a, a^dagger] = metric_sign on
/// states without support on the top level and a is the adjoint of
/// a^dagger in the indefinite metric.
FockState apply_annihilation(const FockState& state, std::string_view mode);

FockState apply_number(const FockState& state, std::string_view mode);

/// sum conj(a) b prod_m metric_sign_m^(n_m).
cplx indefinite_inner(const FockState& a, const FockState& b);
cplx positive_inner(const FockState& a, const FockState& b);

inline double indefinite_norm_sq(const FockState& s) { return indefinite_inner(s, s).real(); }

/// coeff * a^dagger_first a^dagger_second. first == second gives a squared
/// creation operator.
struct PairCreationTerm {
    std::string first;
    std::string second;
    cplx coeff;
};

/// exp(sum of pair-creation terms) |state>, by power series. The generator is
/// nilpotent on the truncated space, so the series terminates exactly.
FockState exp_pair_creation(const FockState& state, std::span<const PairCreationTerm> terms);

struct SqueezePair {
    std::string mode;          ///< j
    std::string partner;       ///< -j
    cplx gamma;                ///< conj(beta/alpha) of the mode
};

/// exp((1/2) sum_{j, -j} gamma* a+_j a+_{-j}) |0;out>, normalized. The sum runs
/// over both j and -j, so each listed pair contributes gamma* a+_j a+_{-j}.
/// Throws DomainError for |gamma| >= 1 and CutoffError when the truncated tail
/// exceeds the leakage budget.
FockState squeezed_in_vacuum(std::span<const SqueezePair> pairs, const ModeRegistry& registry);

/// exp(J a^dagger - conj(J) a) applied to `state`, by scaling and squaring of
/// a truncated power series.
FockState displace(const FockState& state, std::string_view mode, cplx J);

/// Probability of each total occupation sum_{m in modes} n_m (all modes when
/// `modes` is empty), normalized by the positive norm.
std::vector<double> photon_number_distribution(const FockState& state,
                                               std::span<const std::string> modes = {});

/// Probability of n_mode == n_partner == n for n = 0..min cutoff.
std::vector<double> pair_distribution(const FockState& state, std::string_view mode,
                                      std::string_view partner);

/// Columns n_<label>..., re, im; rows with |amp| > 1e-14.
void write_state_csv(std::ostream& out, const FockState& state);
/// Columns n, probability.
void write_distribution_csv(std::ostream& out, std::span<const double> probabilities);

}  // namespace vacrad

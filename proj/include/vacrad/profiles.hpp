#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vacrad {

/// Natural units throughout: c = 1 and vacuum permittivity/permeability = 1.
/// The medium is non-magnetic, so only the permittivity varies.

enum class ProfileKind { step, tanh, tabulated };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view text);

struct ProfileSample {
    double t;
    double epsilon;
};

/// Spatially homogeneous permittivity eps(t) with constant asymptotes.
///
/// step:      eps_i for t < t0, eps_f for t >= t0 (right-continuous).
/// tanh:      eps_i + (eps_f - eps_i) * (1 + tanh((t - t0)/tau)) / 2.
/// tabulated: piecewise-linear through (t, eps) samples; the asymptotes are the
///            first and last sample, evaluation outside the table throws.
class DielectricProfile {
public:
    static DielectricProfile step(double epsilon_initial, double epsilon_final, double t0 = 0.0);
    static DielectricProfile tanh(double epsilon_initial, double epsilon_final, double t0,
                                  double tau);
    static DielectricProfile tabulated(std::vector<ProfileSample> samples, double t0 = 0.0);
    static DielectricProfile constant(double epsilon) { return step(epsilon, epsilon); }

    ProfileKind kind() const noexcept { return kind_; }
    double epsilon_initial() const noexcept { return eps_i_; }
    double epsilon_final() const noexcept { return eps_f_; }
    double t0() const noexcept { return t0_; }
    double tau() const noexcept { return tau_; }
    const std::vector<ProfileSample>& samples() const noexcept { return samples_; }

    double evaluate(double t) const;

    /// Left limit eps(t-). Differs from evaluate() only at a step discontinuity.
    double evaluate_left(double t) const;

    /// Times where eps(t) is not smooth. Integrators restart on these.
    std::vector<double> breakpoints() const;

    /// Interval [t_in, t_out] outside of which eps is within `threshold` of its
    /// asymptotic value on the respective side.
    std::pair<double, double> asymptotic_window(double threshold = 1e-10) const;

    bool is_constant() const noexcept;

private:
    DielectricProfile() = default;

    ProfileKind kind_ = ProfileKind::step;
    double eps_i_ = 1.0;
    double eps_f_ = 1.0;
    double t0_ = 0.0;
    double tau_ = 1.0;
    std::vector<ProfileSample> samples_;
};

/// Free function form used throughout the pipeline.
inline double evaluate(const DielectricProfile& profile, double t) { return profile.evaluate(t); }

/// omega = k / sqrt(eps), the dispersion relation of a plane wave in a
/// medium of constant permittivity.
double dispersion_omega(double k, double epsilon);

/// Reads a whitespace-separated two-column (t, eps) table. Lines starting
/// with '#' and blank lines are skipped.
std::vector<ProfileSample> read_profile_table(const std::filesystem::path& path);

}  // namespace vacrad

#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "vacrad/profiles.hpp"

namespace vacrad {

using cplx = std::complex<double>;

/// Complex amplitude f of one vector-potential mode exp(i k.x) and its time
/// derivative. The polarization vector is carried implicitly.
struct ModeState {
    double k = 1.0;
    double t = 0.0;
    cplx f;
    cplx fdot;
};

struct ModeSolution {
    double k = 1.0;
    double t_start = 0.0;
    double t_end = 0.0;
    double tolerance_used = 0.0;
    /// max over the trajectory of |C(t) - C(t_start)| / |C(t_start)|
    double max_current_drift = 0.0;
    std::vector<ModeState> trajectory;

    const ModeState& initial() const { return trajectory.front(); }
    const ModeState& final() const { return trajectory.back(); }
};

/// Threshold on |eps(t) - eps_asymptote| that defines the in/out regions.
inline constexpr double asymptotic_threshold = 1e-10;

inline constexpr double min_rel_tol = 1e-13;
inline constexpr double max_rel_tol = 1e-6;

/// Positive-frequency in-mode normalized to unit conserved current:
/// f = (2 eps_i omega_in)^(-1/2) exp(-i omega_in (t - t0)), fdot = -i omega_in f.
/// Phases are referenced to the profile's transition time t0.
ModeState initial_plane_wave(double k, const DielectricProfile& profile, double t_start);

/// Positive-frequency plane wave of a medium with constant `epsilon`, phase
/// referenced to `t_ref`.
ModeState plane_wave(double k, double epsilon, double t, double t_ref);

/// C(a, b) = i eps (conj(a.f) b.fdot - conj(a.fdot) b.f). Conserved by the
/// mode equation d/dt(eps fdot) + k^2 f = 0 for any two solutions.
cplx conserved_current(const ModeState& a, const ModeState& b, double epsilon);

/// Complex conjugate (negative-frequency) partner of a mode.
ModeState conjugate(const ModeState& s);

/// Integrates d/dt(eps(t) fdot) + k^2 f = 0 from the in-region plane wave at
/// t_start to t_end. Both endpoints must lie in their asymptotic regions.
ModeSolution evolve_mode(double k, const DielectricProfile& profile, double t_start, double t_end,
                         double rel_tol);

/// Same, over the profile's own asymptotic window.
ModeSolution evolve_mode(double k, const DielectricProfile& profile, double rel_tol);

/// Propagates an arbitrary state to t_end (either direction) without any
/// asymptotic requirement.
ModeSolution evolve_state(const ModeState& initial, const DielectricProfile& profile, double t_end,
                          double rel_tol);

/// Columns: t, Re f, Im f, Re fdot, Im fdot, eps(t).
void write_trajectory_csv(std::ostream& out, const ModeSolution& solution,
                          const DielectricProfile& profile);

}  // namespace vacrad

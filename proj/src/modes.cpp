#include "vacrad/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vacrad/error.hpp"

namespace vacrad {

namespace odeint = boost::numeric::odeint;

namespace {

// Scaled first-order system: q = s f, P = (eps fdot) / s with s^2 = k sqrt(eps_ref),
// which brings |q| and |P| of a plane wave to the same order.
using State = std::array<double, 4>;

struct Scaling {
    double k;
    double s2;

    State pack(const ModeState& m, double eps) const
    {
        const double s = std::sqrt(s2);
        const cplx q = m.f * s;
        const cplx p = eps * m.fdot / s;
        return {q.real(), q.imag(), p.real(), p.imag()};
    }

    ModeState unpack(const State& x, double t, double eps) const
    {
        const double s = std::sqrt(s2);
        const cplx q{x[0], x[1]};
        const cplx p{x[2], x[3]};
        return ModeState{k, t, q / s, p * s / eps};
    }
};

// C = i (conj(q) P - conj(P) q), identical to the unscaled current.
double current_of(const State& x)
{
    const cplx q{x[0], x[1]};
    const cplx p{x[2], x[3]};
    return (cplx{0.0, 1.0} * (std::conj(q) * p - std::conj(p) * q)).real();
}

void check_tolerance(double rel_tol)
{
    if (!(rel_tol >= min_rel_tol && rel_tol <= max_rel_tol))
        throw DomainError(fmt::format("rel_tol must lie in [{:g}, {:g}], got {:g}", min_rel_tol,
                                      max_rel_tol, rel_tol));
}

// Integration segments between profile breakpoints, ordered in the direction
// of travel.
std::vector<std::pair<double, double>> segments(const DielectricProfile& profile, double from,
                                                double to)
{
    const double lo = std::min(from, to);
    const double hi = std::max(from, to);
    std::vector<double> cuts{lo};
    for (double b : profile.breakpoints())
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.emplace_back(cuts[i], cuts[i + 1]);
    if (to < from) {
        std::reverse(out.begin(), out.end());
        for (auto& seg : out) std::swap(seg.first, seg.second);
    }
    return out;
}

ModeSolution integrate_once(const ModeState& start, const DielectricProfile& profile, double t_end,
                            double rel_tol, double step_tol)
{
    const double k = start.k;
    const double eps_ref = profile.evaluate(start.t);
    const Scaling scale{k, k * std::sqrt(eps_ref)};

    ModeSolution sol;
    sol.k = k;
    sol.t_start = start.t;
    sol.t_end = t_end;
    sol.tolerance_used = rel_tol;
    sol.trajectory.push_back(start);

    State x = scale.pack(start, eps_ref);
    const double c0 = current_of(x);
    const double amplitude = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    if (!(amplitude > 0.0)) throw DomainError("cannot evolve the zero mode");
    const double c_scale = std::abs(c0) > 0.0 ? std::abs(c0) : amplitude * amplitude;

    // The embedded error estimate of the 7(8) pair can step over a transition
    // that is short compared to the oscillation period; cap the step at a
    // fraction of the profile timescale. odeint wants the cap signed like the
    // direction of travel, and 0 means no cap.
    const double max_dt = profile.kind() == ProfileKind::tanh && !profile.is_constant()
                              ? std::copysign(0.25 * profile.tau(), t_end - start.t)
                              : 0.0;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(
        step_tol * amplitude, step_tol, max_dt);

    for (auto [a, b] : segments(profile, start.t, t_end)) {
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        // eps restricted to the closed segment, using one-sided limits at its ends.
        auto eps_at = [&](double t) {
            if (t >= hi) return profile.evaluate_left(hi);
            if (t <= lo) return profile.evaluate(lo);
            return profile.evaluate(t);
        };
        auto rhs = [&](const State& y, State& dydt, double t) {
            const double eps = eps_at(t);
            dydt[0] = scale.s2 * y[2] / eps;
            dydt[1] = scale.s2 * y[3] / eps;
            dydt[2] = -k * k * y[0] / scale.s2;
            dydt[3] = -k * k * y[1] / scale.s2;
        };
        auto observe = [&](const State& y, double t) {
            if (t == sol.trajectory.back().t) return;
            sol.trajectory.push_back(scale.unpack(y, t, profile.evaluate(t)));
            sol.max_current_drift =
                std::max(sol.max_current_drift, std::abs(current_of(y) - c0) / c_scale);
        };
        const double omega_max =
            k / std::sqrt(std::min(profile.evaluate(lo), profile.evaluate_left(hi)));
        const double length = b - a;
        const double dt0 = std::copysign(std::min(0.01 / omega_max, std::abs(length)), length);
        try {
            odeint::integrate_adaptive(stepper, rhs, x, a, b, dt0, observe);
        } catch (const odeint::step_adjustment_error& e) {
            throw NumericalFailure(fmt::format(
                "mode integration k={} stalled in [{}, {}]: step size underflow ({})", k, a, b,
                e.what()));
        }
        for (double v : x)
            if (!std::isfinite(v))
                throw NumericalFailure(fmt::format("mode integration k={} produced non-finite values", k));
    }
    // Pin the endpoint exactly.
    sol.trajectory.back().t = t_end;
    return sol;
}

// Local errors accumulate over the oscillations, so the per-step tolerance is
// tightened until the conserved current meets the requested tolerance.
ModeSolution integrate(const ModeState& start, const DielectricProfile& profile, double t_end,
                       double rel_tol)
{
    check_tolerance(rel_tol);
    double step_tol = rel_tol / 100.0;
    ModeSolution sol;
    for (int attempt = 0; attempt < 3; ++attempt) {
        sol = integrate_once(start, profile, t_end, rel_tol, step_tol);
        if (sol.max_current_drift <= rel_tol) return sol;
        step_tol = std::max(step_tol / 10.0, 1e-17);
    }
    if (sol.max_current_drift > 10.0 * rel_tol)
        throw NumericalFailure(fmt::format(
            "mode integration k={}: conserved-current drift {:.2e} exceeds 10 * rel_tol = {:.2e}",
            start.k, sol.max_current_drift, 10.0 * rel_tol));
    return sol;
}

}  // namespace

ModeState plane_wave(double k, double epsilon, double t, double t_ref)
{
    const double omega = dispersion_omega(k, epsilon);
    const double norm = 1.0 / std::sqrt(2.0 * epsilon * omega);
    const cplx f = norm * std::exp(cplx{0.0, -omega * (t - t_ref)});
    return ModeState{k, t, f, cplx{0.0, -omega} * f};
}

ModeState initial_plane_wave(double k, const DielectricProfile& profile, double t_start)
{
    const double eps = profile.evaluate(t_start);
    if (std::abs(eps - profile.epsilon_initial()) >= asymptotic_threshold)
        throw PreconditionError(fmt::format(
            "t_start = {} is not in the in-region: eps = {} differs from eps_initial = {}", t_start,
            eps, profile.epsilon_initial()));
    return plane_wave(k, profile.epsilon_initial(), t_start, profile.t0());
}

cplx conserved_current(const ModeState& a, const ModeState& b, double epsilon)
{
    if (a.t != b.t || a.k != b.k)
        throw UsageError(fmt::format("conserved_current needs equal (k, t); got ({}, {}) vs ({}, {})",
                                     a.k, a.t, b.k, b.t));
    return cplx{0.0, epsilon} * (std::conj(a.f) * b.fdot - std::conj(a.fdot) * b.f);
}

ModeState conjugate(const ModeState& s) { return ModeState{s.k, s.t, std::conj(s.f), std::conj(s.fdot)}; }

ModeSolution evolve_mode(double k, const DielectricProfile& profile, double t_start, double t_end,
                         double rel_tol)
{
    check_tolerance(rel_tol);
    if (!(t_end > t_start))
        throw PreconditionError(fmt::format("need t_start < t_end, got [{}, {}]", t_start, t_end));
    const double eps_end = profile.evaluate(t_end);
    if (std::abs(eps_end - profile.epsilon_final()) >= asymptotic_threshold)
        throw PreconditionError(fmt::format(
            "t_end = {} is not in the out-region: eps = {} differs from eps_final = {}", t_end,
            eps_end, profile.epsilon_final()));
    return integrate(initial_plane_wave(k, profile, t_start), profile, t_end, rel_tol);
}

ModeSolution evolve_mode(double k, const DielectricProfile& profile, double rel_tol)
{
    const auto [t_in, t_out] = profile.asymptotic_window(asymptotic_threshold);
    return evolve_mode(k, profile, t_in, t_out, rel_tol);
}

ModeSolution evolve_state(const ModeState& initial, const DielectricProfile& profile, double t_end,
                          double rel_tol)
{
    if (!(initial.k > 0.0)) throw DomainError("wavenumber must be positive");
    return integrate(initial, profile, t_end, rel_tol);
}

void write_trajectory_csv(std::ostream& out, const ModeSolution& solution,
                          const DielectricProfile& profile)
{
    out << "t,re_f,im_f,re_fdot,im_fdot,epsilon\n";
    for (const auto& s : solution.trajectory)
        fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t, s.f.real(),
                   s.f.imag(), s.fdot.real(), s.fdot.imag(), profile.evaluate(s.t));
}

}  // namespace vacrad

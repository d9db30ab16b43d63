#include "vacrad/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "vacrad/error.hpp"

namespace vacrad {

namespace {

void require_physical(double eps, const char* name)
{
    if (!(eps >= 1.0) || !std::isfinite(eps))
        throw DomainError(fmt::format("{} must be a finite value >= 1, got {}", name, eps));
}

// (1 + tanh(x)) / 2 without the cancellation near x -> -inf.
double logistic(double x) { return 1.0 / (1.0 + std::exp(-2.0 * x)); }

}  // namespace

std::string_view to_string(ProfileKind kind)
{
    switch (kind) {
    case ProfileKind::step: return "step";
    case ProfileKind::tanh: return "tanh";
    case ProfileKind::tabulated: return "tabulated";
    }
    return "unknown";
}

ProfileKind parse_profile_kind(std::string_view text)
{
    if (text == "step") return ProfileKind::step;
    if (text == "tanh") return ProfileKind::tanh;
    if (text == "tabulated") return ProfileKind::tabulated;
    throw DomainError(fmt::format("unknown profile kind '{}'", text));
}

DielectricProfile DielectricProfile::step(double epsilon_initial, double epsilon_final, double t0)
{
    require_physical(epsilon_initial, "epsilon_initial");
    require_physical(epsilon_final, "epsilon_final");
    if (!std::isfinite(t0)) throw DomainError("t0 must be finite");
    DielectricProfile p;
    p.kind_ = ProfileKind::step;
    p.eps_i_ = epsilon_initial;
    p.eps_f_ = epsilon_final;
    p.t0_ = t0;
    return p;
}

DielectricProfile DielectricProfile::tanh(double epsilon_initial, double epsilon_final, double t0,
                                          double tau)
{
    auto p = step(epsilon_initial, epsilon_final, t0);
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError(fmt::format("tau must be positive, got {}", tau));
    p.kind_ = ProfileKind::tanh;
    p.tau_ = tau;
    return p;
}

DielectricProfile DielectricProfile::tabulated(std::vector<ProfileSample> samples, double t0)
{
    if (samples.size() < 2) throw DomainError("tabulated profile needs at least two samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        require_physical(samples[i].epsilon, "tabulated epsilon");
        if (!std::isfinite(samples[i].t)) throw DomainError("tabulated time must be finite");
        if (i > 0 && !(samples[i].t > samples[i - 1].t))
            throw DomainError(fmt::format("tabulated times must be strictly increasing (row {})", i));
    }
    DielectricProfile p;
    p.kind_ = ProfileKind::tabulated;
    p.eps_i_ = samples.front().epsilon;
    p.eps_f_ = samples.back().epsilon;
    p.t0_ = t0;
    p.samples_ = std::move(samples);
    return p;
}

double DielectricProfile::evaluate(double t) const
{
    switch (kind_) {
    case ProfileKind::step:
        return t < t0_ ? eps_i_ : eps_f_;
    case ProfileKind::tanh:
        return eps_i_ + (eps_f_ - eps_i_) * logistic((t - t0_) / tau_);
    case ProfileKind::tabulated: {
        if (t < samples_.front().t || t > samples_.back().t)
            throw ExtrapolationError(fmt::format("t = {} outside tabulated range [{}, {}]", t,
                                                 samples_.front().t, samples_.back().t));
        auto hi = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](double v, const ProfileSample& s) { return v < s.t; });
        if (hi == samples_.end()) return samples_.back().epsilon;
        auto lo = hi - 1;
        const double w = (t - lo->t) / (hi->t - lo->t);
        return lo->epsilon + w * (hi->epsilon - lo->epsilon);
    }
    }
    return eps_i_;
}

double DielectricProfile::evaluate_left(double t) const
{
    if (kind_ == ProfileKind::step && t == t0_) return eps_i_;
    return evaluate(t);
}

std::vector<double> DielectricProfile::breakpoints() const
{
    if (kind_ == ProfileKind::step && eps_i_ != eps_f_) return {t0_};
    if (kind_ == ProfileKind::tabulated) {
        std::vector<double> out;
        out.reserve(samples_.size());
        for (const auto& s : samples_) out.push_back(s.t);
        return out;
    }
    return {};
}

std::pair<double, double> DielectricProfile::asymptotic_window(double threshold) const
{
    switch (kind_) {
    case ProfileKind::step:
        return {t0_ - 1.0, t0_ + 1.0};
    case ProfileKind::tanh: {
        const double delta = std::abs(eps_f_ - eps_i_);
        // delta * logistic(-x) < threshold for x beyond half_width (one tau of margin).
        const double half_width = 0.5 * std::log(std::max(delta / threshold, 2.0)) + 1.0;
        return {t0_ - half_width * tau_, t0_ + half_width * tau_};
    }
    case ProfileKind::tabulated:
        return {samples_.front().t, samples_.back().t};
    }
    return {t0_, t0_};
}

bool DielectricProfile::is_constant() const noexcept
{
    if (kind_ != ProfileKind::tabulated) return eps_i_ == eps_f_;
    return std::all_of(samples_.begin(), samples_.end(),
                       [&](const ProfileSample& s) { return s.epsilon == eps_i_; });
}

double dispersion_omega(double k, double epsilon)
{
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError(fmt::format("wavenumber must be positive, got {}", k));
    require_physical(epsilon, "epsilon");
    return k / std::sqrt(epsilon);
}

std::vector<ProfileSample> read_profile_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError(fmt::format("cannot open profile table '{}'", path.string()));
    std::vector<ProfileSample> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        ProfileSample s{};
        if (!(fields >> s.t >> s.epsilon))
            throw UsageError(fmt::format("{}:{}: expected two numeric columns", path.string(), lineno));
        rows.push_back(s);
    }
    return rows;
}

}  // namespace vacrad

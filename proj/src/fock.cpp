#include "vacrad/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vacrad/error.hpp"

namespace vacrad {

std::string_view to_string(Polarization p)
{
    switch (p) {
    case Polarization::transverse: return "transverse";
    case Polarization::scalar: return "scalar";
    case Polarization::longitudinal: return "longitudinal";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// ModeRegistry

ModeRegistry::ModeRegistry(std::vector<ModeSpec> modes)
{
    std::set<std::string, std::less<>> seen;
    auto data = std::make_shared<Data>();
    std::size_t stride = 1;
    // Last mode varies fastest.
    data->strides.resize(modes.size());
    for (std::size_t i = modes.size(); i-- > 0;) {
        const auto& m = modes[i];
        if (m.label.empty()) throw UsageError("mode labels must be non-empty");
        if (!seen.insert(m.label).second)
            throw UsageError(fmt::format("duplicate mode label '{}'", m.label));
        if (m.cutoff < 1)
            throw UsageError(fmt::format("mode '{}': cutoff must be >= 1, got {}", m.label, m.cutoff));
        data->strides[i] = stride;
        stride *= static_cast<std::size_t>(m.cutoff + 1);
    }
    data->dimension = stride;
    data->modes = std::move(modes);
    data_ = std::move(data);
}

const std::vector<ModeSpec>& ModeRegistry::modes() const
{
    static const std::vector<ModeSpec> empty;
    return data_ ? data_->modes : empty;
}

std::size_t ModeRegistry::index_of(std::string_view label) const
{
    for (std::size_t i = 0; i < size(); ++i)
        if ((*this)[i].label == label) return i;
    throw UsageError(fmt::format("mode '{}' is not registered", label));
}

bool ModeRegistry::contains(std::string_view label) const noexcept
{
    for (std::size_t i = 0; i < size(); ++i)
        if ((*this)[i].label == label) return true;
    return false;
}

std::vector<int> ModeRegistry::occupations(std::size_t index) const
{
    std::vector<int> out(size());
    for (std::size_t m = 0; m < size(); ++m) out[m] = occupation(index, m);
    return out;
}

std::size_t ModeRegistry::index_of_occupations(std::span<const int> occupations) const
{
    if (occupations.size() != size())
        throw UsageError(fmt::format("expected {} occupation numbers, got {}", size(),
                                     occupations.size()));
    std::size_t index = 0;
    for (std::size_t m = 0; m < size(); ++m) {
        if (occupations[m] < 0 || occupations[m] > (*this)[m].cutoff)
            throw UsageError(fmt::format("occupation {} of mode '{}' outside [0, {}]",
                                         occupations[m], (*this)[m].label, (*this)[m].cutoff));
        index += static_cast<std::size_t>(occupations[m]) * stride(m);
    }
    return index;
}

int ModeRegistry::metric(std::size_t index) const
{
    int sign = 1;
    for (std::size_t m = 0; m < size(); ++m)
        if ((*this)[m].metric_sign() < 0 && (occupation(index, m) & 1)) sign = -sign;
    return sign;
}

bool operator==(const ModeRegistry& a, const ModeRegistry& b)
{
    if (a.data_ == b.data_) return true;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (x.label != y.label || x.polarization != y.polarization || x.cutoff != y.cutoff)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// FockState

FockState::FockState(ModeRegistry registry)
    : registry_(std::move(registry)), amps_(registry_.dimension())
{
}

FockState::FockState(ModeRegistry registry, std::vector<cplx> amplitudes, double leakage)
    : registry_(std::move(registry)), amps_(std::move(amplitudes)), leakage_(leakage)
{
    if (amps_.size() != registry_.dimension())
        throw UsageError(fmt::format("amplitude vector has {} entries, registry needs {}",
                                     amps_.size(), registry_.dimension()));
}

FockState FockState::vacuum(ModeRegistry registry)
{
    FockState s(std::move(registry));
    s.amps_[0] = 1.0;
    return s;
}

FockState FockState::basis(ModeRegistry registry, std::span<const int> occupations)
{
    FockState s(std::move(registry));
    s.amps_[s.registry_.index_of_occupations(occupations)] = 1.0;
    return s;
}

cplx FockState::amplitude(std::span<const int> occupations) const
{
    return amps_[registry_.index_of_occupations(occupations)];
}

double FockState::positive_norm_sq() const
{
    double sum = 0.0;
    for (const auto& c : amps_) sum += std::norm(c);
    return sum;
}

double FockState::boundary_mass() const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        for (std::size_t m = 0; m < registry_.size(); ++m) {
            if (registry_.occupation(i, m) == registry_[m].cutoff) {
                sum += std::norm(amps_[i]);
                break;
            }
        }
    }
    return sum;
}

FockState FockState::interior() const
{
    FockState out = *this;
    for (std::size_t i = 0; i < amps_.size(); ++i)
        for (std::size_t m = 0; m < registry_.size(); ++m)
            if (registry_.occupation(i, m) == registry_[m].cutoff) {
                out.amps_[i] = 0.0;
                break;
            }
    return out;
}

FockState FockState::normalized() const
{
    const double n = positive_norm_sq();
    if (!(n > 0.0)) throw NumericalFailure("cannot normalize the zero vector");
    return *this * cplx{1.0 / std::sqrt(n), 0.0};
}

FockState FockState::with_leakage(double leakage) const
{
    FockState out = *this;
    out.leakage_ = leakage;
    return out;
}

FockState FockState::operator+(const FockState& other) const
{
    if (!(registry_ == other.registry_)) throw UsageError("adding states of different registries");
    FockState out = *this;
    for (std::size_t i = 0; i < amps_.size(); ++i) out.amps_[i] += other.amps_[i];
    out.leakage_ = leakage_ + other.leakage_;
    return out;
}

FockState FockState::operator-(const FockState& other) const { return *this + other * cplx{-1.0, 0.0}; }

FockState FockState::operator*(cplx scale) const
{
    FockState out = *this;
    for (auto& c : out.amps_) c *= scale;
    return out;
}

// ---------------------------------------------------------------------------
// Operators

namespace {

// Adds coeff * a^dagger_m applied to `in` into `out`; returns the input mass
// that sat on the cutoff of mode m.
double add_creation(std::span<const cplx> in, std::span<cplx> out, const ModeRegistry& reg,
                    std::size_t m, cplx coeff)
{
    const std::size_t stride = reg.stride(m);
    const int cutoff = reg[m].cutoff;
    double dropped = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == cplx{}) continue;
        const int n = reg.occupation(i, m);
        if (n == cutoff) {
            dropped += std::norm(in[i]);
            continue;
        }
        out[i + stride] += coeff * std::sqrt(static_cast<double>(n + 1)) * in[i];
    }
    return dropped;
}

void add_annihilation(std::span<const cplx> in, std::span<cplx> out, const ModeRegistry& reg,
                      std::size_t m, cplx coeff)
{
    const std::size_t stride = reg.stride(m);
    const double sign = reg[m].metric_sign();
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == cplx{}) continue;
        const int n = reg.occupation(i, m);
        if (n == 0) continue;
        out[i - stride] += coeff * sign * std::sqrt(static_cast<double>(n)) * in[i];
    }
}

double norm_of(std::span<const cplx> v)
{
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

void check_same_registry(const FockState& a, const FockState& b)
{
    if (!(a.registry() == b.registry()))
        throw UsageError("inner product of states over different registries");
}

}  // namespace

FockState apply_creation(const FockState& state, std::string_view mode)
{
    const auto& reg = state.registry();
    const std::size_t m = reg.index_of(mode);
    std::vector<cplx> out(reg.dimension());
    const double dropped = add_creation(state.amplitudes(), out, reg, m, 1.0);
    return FockState(reg, std::move(out), state.leakage() + dropped);
}

FockState apply_annihilation(const FockState& state, std::string_view mode)
{
    const auto& reg = state.registry();
    const std::size_t m = reg.index_of(mode);
    std::vector<cplx> out(reg.dimension());
    add_annihilation(state.amplitudes(), out, reg, m, 1.0);
    return FockState(reg, std::move(out), state.leakage());
}

FockState apply_number(const FockState& state, std::string_view mode)
{
    const auto& reg = state.registry();
    const std::size_t m = reg.index_of(mode);
    std::vector<cplx> out(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= static_cast<double>(reg.occupation(i, m));
    return FockState(reg, std::move(out), state.leakage());
}

cplx indefinite_inner(const FockState& a, const FockState& b)
{
    check_same_registry(a, b);
    const auto& reg = a.registry();
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    cplx sum{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == cplx{} || y[i] == cplx{}) continue;
        sum += static_cast<double>(reg.metric(i)) * std::conj(x[i]) * y[i];
    }
    return sum;
}

cplx positive_inner(const FockState& a, const FockState& b)
{
    check_same_registry(a, b);
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    cplx sum{};
    for (std::size_t i = 0; i < x.size(); ++i) sum += std::conj(x[i]) * y[i];
    return sum;
}

FockState exp_pair_creation(const FockState& state, std::span<const PairCreationTerm> terms)
{
    const auto& reg = state.registry();
    struct Resolved {
        std::size_t first, second;
        cplx coeff;
    };
    std::vector<Resolved> ops;
    for (const auto& t : terms) ops.push_back({reg.index_of(t.first), reg.index_of(t.second), t.coeff});

    std::vector<cplx> sum(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<cplx> term = sum;
    std::vector<cplx> half(reg.dimension());
    std::vector<cplx> next(reg.dimension());
    double dropped = 0.0;
    for (int order = 1;; ++order) {
        std::fill(next.begin(), next.end(), cplx{});
        double dropped_here = 0.0;
        for (const auto& op : ops) {
            std::fill(half.begin(), half.end(), cplx{});
            dropped_here += add_creation(term, half, reg, op.second, 1.0);
            dropped_here += add_creation(half, next, reg, op.first, op.coeff / static_cast<double>(order));
        }
        dropped += dropped_here;
        const double term_norm = norm_of(next);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += next[i];
        if (term_norm == 0.0 || term_norm < series_term_tolerance * norm_of(sum)) break;
        term.swap(next);
    }
    FockState out(reg, std::move(sum), state.leakage());
    const double total = out.positive_norm_sq();
    return out.with_leakage(state.leakage() + (total > 0.0 ? dropped / total : 0.0));
}

namespace {

// Tail probability beyond n_max pairs of the normalized squeezed state and
// the smallest cutoff bringing it under the budget.
struct Tail {
    double mass;
    int suggested_cutoff;
};

Tail two_mode_tail(double g2, int n_max)
{
    if (g2 == 0.0) return {0.0, 1};
    const double mass = std::pow(g2, n_max + 1);
    const int suggested = static_cast<int>(std::ceil(std::log(leakage_budget) / std::log(g2)));
    return {mass, std::max(suggested, 1)};
}

// Normalized single-mode exp(g*/2 a+^2)|0>: P(0) = sqrt(1 - |g|^2),
// P(2n+2) / P(2n) = |g|^2 (2n+1) / (2n+2).
Tail single_mode_tail(double g2, int cutoff)
{
    if (g2 == 0.0) return {0.0, 1};
    double p = std::sqrt(1.0 - g2);
    double tail = 0.0;
    for (int n = 0; n < 1000000 && (2 * n <= cutoff || p > 1e-30 * tail); ++n) {
        if (2 * n > cutoff) tail += p;
        p *= g2 * (2.0 * n + 1.0) / (2.0 * n + 2.0);
    }
    // Smallest even cutoff whose tail is under the budget; walk the tail down.
    double remaining = 1.0;
    p = std::sqrt(1.0 - g2);
    int suggested = 0;
    for (int n = 0; n < 1000000; ++n) {
        remaining -= p;
        p *= g2 * (2.0 * n + 1.0) / (2.0 * n + 2.0);
        // Once the terms are small, the tail is bounded by p / (1 - |g|^2).
        if (remaining < leakage_budget || p / (1.0 - g2) < leakage_budget) {
            suggested = 2 * n;
            break;
        }
    }
    return {tail, std::max(suggested, 1)};
}

}  // namespace

FockState squeezed_in_vacuum(std::span<const SqueezePair> pairs, const ModeRegistry& registry)
{
    std::vector<PairCreationTerm> terms;
    std::set<std::string, std::less<>> used;
    double tail = 0.0;
    int suggested = 0;
    for (const auto& p : pairs) {
        const double g2 = std::norm(p.gamma);
        if (!(g2 < 1.0))
            throw DomainError(fmt::format("squeeze |gamma| = {} is not < 1: state is not normalizable",
                                          std::sqrt(g2)));
        const std::size_t a = registry.index_of(p.mode);
        const std::size_t b = registry.index_of(p.partner);
        for (const auto& label : {p.mode, p.partner})
            if (!used.insert(label).second && p.mode != p.partner)
                throw UsageError(fmt::format("mode '{}' appears in more than one squeeze pair", label));
        if (a == b) {
            // Compact layout: (1/2) gamma* a+^2 on a single mode.
            terms.push_back({p.mode, p.mode, 0.5 * std::conj(p.gamma)});
            const auto t = single_mode_tail(g2, registry[a].cutoff);
            tail += t.mass;
            suggested = std::max(suggested, t.suggested_cutoff);
        } else {
            terms.push_back({p.mode, p.partner, std::conj(p.gamma)});
            const auto t = two_mode_tail(g2, std::min(registry[a].cutoff, registry[b].cutoff));
            tail += t.mass;
            suggested = std::max(suggested, t.suggested_cutoff);
        }
    }
    if (tail >= leakage_budget)
        throw CutoffError(fmt::format("squeezed vacuum leaks {:.3e} beyond the cutoff (budget {:.0e}); "
                                      "suggested cutoff {}",
                                      tail, leakage_budget, suggested),
                          suggested);
    const auto state = exp_pair_creation(FockState::vacuum(registry), terms);
    return state.normalized().with_leakage(tail);
}

FockState displace(const FockState& state, std::string_view mode, cplx J)
{
    const auto& reg = state.registry();
    const std::size_t m = reg.index_of(mode);
    if (J == cplx{}) return state;

    // Operator norm of J a+ - J* a on the truncated mode is about
    // 2 |J| sqrt(cutoff); split until each factor's series converges fast.
    const double size = 2.0 * std::abs(J) * std::sqrt(static_cast<double>(reg[m].cutoff) + 1.0);
    int squarings = 0;
    while (size / std::ldexp(1.0, squarings) > 0.5) ++squarings;
    const cplx j = J / std::ldexp(1.0, squarings);

    std::vector<cplx> current(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<cplx> term(current.size());
    std::vector<cplx> next(current.size());
    double dropped = 0.0;
    const long repeats = 1L << squarings;
    for (long r = 0; r < repeats; ++r) {
        std::vector<cplx> sum = current;
        term = current;
        for (int order = 1; order < 400; ++order) {
            std::fill(next.begin(), next.end(), cplx{});
            const double inv = 1.0 / order;
            dropped += std::norm(j * inv) *
                       add_creation(term, next, reg, m, j * inv);
            add_annihilation(term, next, reg, m, -std::conj(j) * inv);
            const double term_norm = norm_of(next);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += next[i];
            if (term_norm == 0.0 || term_norm < series_term_tolerance * norm_of(sum)) break;
            term.swap(next);
        }
        current.swap(sum);
    }

    FockState out(reg, std::move(current), state.leakage());
    const double before = state.positive_norm_sq();
    double leak = dropped / (before > 0.0 ? before : 1.0);
    if (reg[m].metric_sign() > 0 && before > 0.0)
        leak = std::max(leak, std::abs(out.positive_norm_sq() - before) / before);
    if (leak >= leakage_budget) {
        // Poisson tail of the displacement plus the highest occupied level.
        const double mean = std::norm(J);
        int top = 0;
        for (std::size_t i = 0; i < state.amplitudes().size(); ++i)
            if (state.amplitudes()[i] != cplx{}) top = std::max(top, reg.occupation(i, m));
        double p = std::exp(-mean), acc = 0.0;
        int n = 0;
        for (; n < 100000; ++n) {
            acc += p;
            if (1.0 - acc < leakage_budget * 1e-2) break;
            p *= mean / (n + 1);
        }
        const int suggested = 2 * (top + n) + 10;
        throw CutoffError(fmt::format("displacement on mode '{}' leaks {:.3e} (budget {:.0e}); "
                                      "suggested cutoff {}",
                                      mode, leak, leakage_budget, suggested),
                          suggested);
    }
    return out.with_leakage(state.leakage() + leak);
}

std::vector<double> photon_number_distribution(const FockState& state,
                                               std::span<const std::string> modes)
{
    const auto& reg = state.registry();
    std::vector<std::size_t> idx;
    if (modes.empty()) {
        idx.resize(reg.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
    } else {
        for (const auto& label : modes) idx.push_back(reg.index_of(label));
    }
    int max_total = 0;
    for (auto m : idx) max_total += reg[m].cutoff;
    std::vector<double> p(static_cast<std::size_t>(max_total) + 1, 0.0);
    const auto amps = state.amplitudes();
    double total = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double w = std::norm(amps[i]);
        if (w == 0.0) continue;
        int n = 0;
        for (auto m : idx) n += reg.occupation(i, m);
        p[static_cast<std::size_t>(n)] += w;
        total += w;
    }
    if (total > 0.0)
        for (auto& v : p) v /= total;
    return p;
}

std::vector<double> pair_distribution(const FockState& state, std::string_view mode,
                                      std::string_view partner)
{
    const auto& reg = state.registry();
    const std::size_t a = reg.index_of(mode);
    const std::size_t b = reg.index_of(partner);
    const int n_max = std::min(reg[a].cutoff, reg[b].cutoff);
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    const auto amps = state.amplitudes();
    double total = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double w = std::norm(amps[i]);
        total += w;
        const int na = reg.occupation(i, a);
        if (w != 0.0 && na == reg.occupation(i, b)) p[static_cast<std::size_t>(na)] += w;
    }
    if (total > 0.0)
        for (auto& v : p) v /= total;
    return p;
}

void write_state_csv(std::ostream& out, const FockState& state)
{
    const auto& reg = state.registry();
    for (const auto& m : reg.modes()) out << "n_" << m.label << ',';
    out << "re,im\n";
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (std::abs(amps[i]) <= 1e-14) continue;
        for (std::size_t m = 0; m < reg.size(); ++m) out << reg.occupation(i, m) << ',';
        fmt::print(out, "{:.17g},{:.17g}\n", amps[i].real(), amps[i].imag());
    }
}

void write_distribution_csv(std::ostream& out, std::span<const double> probabilities)
{
    out << "n,probability\n";
    for (std::size_t n = 0; n < probabilities.size(); ++n)
        fmt::print(out, "{},{:.17g}\n", n, probabilities[n]);
}

}  // namespace vacrad

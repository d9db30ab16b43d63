#include "vacrad/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vacrad/error.hpp"
#include "vacrad/parallel.hpp"

namespace vacrad {

namespace {

const std::string current_mode = "k";
const std::string partner_mode = "-k";

ModeRegistry layout_registry(int cutoff, PairLayout layout)
{
    if (layout == PairLayout::compact)
        return ModeRegistry({{current_mode, Polarization::transverse, cutoff}});
    return ModeRegistry({{current_mode, Polarization::transverse, cutoff},
                         {partner_mode, Polarization::transverse, cutoff}});
}

void check_coupling(cplx J)
{
    if (J == cplx{}) throw DomainError("current strength J must be nonzero");
    if (std::abs(J) > max_coupling)
        throw DomainError(fmt::format("|J| = {} exceeds {} where a single insertion is meaningful",
                                      std::abs(J), max_coupling));
}

// Component of `state` with total occupation exactly `total`.
FockState project_total(const FockState& state, int total)
{
    const auto& reg = state.registry();
    std::vector<cplx> out(reg.dimension());
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        int n = 0;
        for (std::size_t m = 0; m < reg.size(); ++m) n += reg.occupation(i, m);
        if (n == total) out[i] = amps[i];
    }
    return FockState(reg, std::move(out), state.leakage());
}

FockState insert_current(const FockState& state, cplx J)
{
    return apply_creation(state, current_mode) * J +
           apply_annihilation(state, current_mode) * std::conj(J);
}

// Unit uniform in [0, 1) from the top 53 bits; the engine output is fixed by
// the standard, unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

}  // namespace

double EmissionDistribution::probability(int n) const
{
    for (const auto& c : counts)
        if (c.n == n) return c.probability;
    return 0.0;
}

double EmissionDistribution::even_mass() const
{
    double sum = 0.0;
    for (const auto& c : counts)
        if (c.n % 2 == 0) sum += c.probability;
    return sum;
}

double EmissionDistribution::total() const
{
    double sum = 0.0;
    for (const auto& c : counts) sum += c.probability;
    return sum;
}

FockState radiation_vacuum(cplx gamma, int cutoff, PairLayout layout)
{
    const auto reg = layout_registry(cutoff, layout);
    const SqueezePair pair{current_mode, layout == PairLayout::compact ? current_mode : partner_mode,
                           gamma};
    return squeezed_in_vacuum(std::span(&pair, 1), reg);
}

FockState emission_amplitude(cplx J, cplx gamma, int cutoff, PairLayout layout)
{
    check_coupling(J);
    return insert_current(radiation_vacuum(gamma, cutoff, layout), J);
}

EmissionDistribution distribution_of(const FockState& amplitude)
{
    const auto probabilities = photon_number_distribution(amplitude);
    EmissionDistribution d;
    d.weight = amplitude.positive_norm_sq();
    for (std::size_t n = 0; n < probabilities.size(); ++n)
        if (probabilities[n] > 0.0) d.counts.push_back({static_cast<int>(n), probabilities[n]});
    d.leakage = d.weight > 0.0 ? amplitude.leakage() / d.weight : 0.0;
    return d;
}

EmissionDistribution first_order_amplitudes(cplx J, cplx gamma, int cutoff, PairLayout layout)
{
    const auto vacuum = radiation_vacuum(gamma, cutoff, layout);
    check_coupling(J);
    const auto amplitude = insert_current(vacuum.with_leakage(0.0), J);
    auto d = distribution_of(amplitude);
    // Mass lost when a+ hits the cutoff, plus the squeeze tail itself.
    d.leakage += vacuum.leakage();
    if (d.leakage >= leakage_budget) {
        const int suggested = 2 * cutoff;
        throw CutoffError(fmt::format("emission amplitude leaks {:.3e} at cutoff {} (budget {:.0e}); "
                                      "suggested cutoff {}",
                                      d.leakage, cutoff, leakage_budget, suggested),
                          suggested);
    }
    return d;
}

std::vector<FockState> higher_order_amplitudes(cplx J, cplx gamma, int max_pairs, int cutoff,
                                               PairLayout layout)
{
    if (max_pairs < 1) throw DomainError("max_pairs must be >= 1");
    if (2 * max_pairs + 1 > cutoff - 5)
        throw DomainError(fmt::format("max_pairs = {} needs cutoff >= {}, got {}", max_pairs,
                                      2 * max_pairs + 6, cutoff));
    check_coupling(J);
    const auto vacuum = radiation_vacuum(gamma, cutoff, layout);
    std::vector<FockState> terms;
    terms.reserve(static_cast<std::size_t>(max_pairs));
    for (int m = 1; m <= max_pairs; ++m) {
        const auto emitted = apply_creation(project_total(vacuum, 2 * (m - 1)), current_mode) * J;
        const auto absorbed =
            apply_annihilation(project_total(vacuum, 2 * m), current_mode) * std::conj(J);
        terms.push_back(emitted + absorbed);
    }
    return terms;
}

std::vector<EmissionDistribution> higher_order_terms(cplx J, cplx gamma, int max_pairs, int cutoff,
                                                     PairLayout layout)
{
    std::vector<EmissionDistribution> out;
    int m = 1;
    for (const auto& amplitude : higher_order_amplitudes(J, gamma, max_pairs, cutoff, layout)) {
        auto d = distribution_of(amplitude);
        d.term = m++;
        out.push_back(std::move(d));
    }
    return out;
}

EmissionDistribution resum_terms(std::span<const FockState> terms)
{
    if (terms.empty()) throw UsageError("resum_terms: no terms");
    FockState sum = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) sum = sum + terms[i];
    return distribution_of(sum);
}

CorrelationSummary sample_arrival_correlations(const EmissionDistribution& dist,
                                               std::uint64_t events, std::uint64_t seed,
                                               int workers)
{
    if (events < 10000)
        throw DomainError(fmt::format("need at least 10^4 events, got {}", events));
    if (dist.counts.empty()) throw UsageError("cannot sample an empty distribution");

    std::vector<int> support;
    std::vector<double> cdf;
    double acc = 0.0;
    int n_max = 0;
    for (const auto& c : dist.counts) {
        if (c.probability <= 0.0) continue;
        acc += c.probability;
        support.push_back(c.n);
        cdf.push_back(acc);
        n_max = std::max(n_max, c.n);
    }
    for (auto& v : cdf) v /= acc;
    cdf.back() = 1.0;

    const std::uint64_t chunks = (events + sampling_chunk - 1) / sampling_chunk;
    std::vector<std::vector<std::uint64_t>> per_chunk(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        std::mt19937_64 engine(seq);
        const std::uint64_t begin = c * sampling_chunk;
        const std::uint64_t end = std::min(events, begin + sampling_chunk);
        auto& hist = per_chunk[c];
        hist.assign(static_cast<std::size_t>(n_max) + 1, 0);
        for (std::uint64_t e = begin; e < end; ++e) {
            const double u = unit_uniform(engine);
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const auto slot = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
                it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
            ++hist[static_cast<std::size_t>(support[slot])];
        }
    });

    CorrelationSummary s;
    s.events = events;
    s.seed = seed;
    s.histogram.assign(static_cast<std::size_t>(n_max) + 1, 0);
    for (const auto& hist : per_chunk)
        for (std::size_t n = 0; n < hist.size(); ++n) s.histogram[n] += hist[n];

    const double total = static_cast<double>(events);
    double odd = 0.0, m1 = 0.0, m2 = 0.0, fact2 = 0.0, three = 0.0;
    for (std::size_t n = 0; n < s.histogram.size(); ++n) {
        const double w = static_cast<double>(s.histogram[n]);
        const double x = static_cast<double>(n);
        if (n % 2 == 1) odd += w;
        if (n >= 3) three += w;
        m1 += w * x;
        m2 += w * x * x;
        fact2 += w * x * (x - 1.0);
    }
    s.p_odd = odd / total;
    s.mean = m1 / total;
    s.variance = m2 / total - s.mean * s.mean;
    s.pair_covariance = fact2 / total - s.mean * s.mean;
    s.g2 = s.mean > 0.0 ? (fact2 / total) / (s.mean * s.mean) : 0.0;
    s.fraction_three_or_more = three / total;
    const double c1 = s.histogram.size() > 1 ? static_cast<double>(s.histogram[1]) : 0.0;
    const double c3 = s.histogram.size() > 3 ? static_cast<double>(s.histogram[3]) : 0.0;
    s.p3_over_p1 = c1 > 0.0 ? c3 / c1 : 0.0;
    return s;
}

void write_emission_csv(std::ostream& out, const EmissionDistribution& dist)
{
    out << "n,probability\n";
    for (const auto& c : dist.counts) fmt::print(out, "{},{:.17g}\n", c.n, c.probability);
}

void write_correlation_summary(std::ostream& out, const CorrelationSummary& s)
{
    out << "key,value\n";
    fmt::print(out, "events,{}\nseed,{}\np_odd,{:.17g}\nmean,{:.17g}\nvariance,{:.17g}\n"
                    "pair_covariance,{:.17g}\ng2,{:.17g}\nfraction_n_ge_3,{:.17g}\np3_over_p1,{:.17g}\n",
               s.events, s.seed, s.p_odd, s.mean, s.variance, s.pair_covariance, s.g2,
               s.fraction_three_or_more, s.p3_over_p1);
    for (std::size_t n = 0; n < s.histogram.size(); ++n)
        if (s.histogram[n] > 0) fmt::print(out, "count_{},{}\n", n, s.histogram[n]);
}

}  // namespace vacrad

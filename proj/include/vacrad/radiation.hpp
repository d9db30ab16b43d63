#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "vacrad/fock.hpp"

namespace vacrad {

/// Where the vacuum pairs live relative to the mode the current couples to.
///   pair:    current on mode k, pairs on (k, -k)
///   compact: single mode k carries both the current and a one-mode squeeze
enum class PairLayout { pair, compact };

struct EmissionCount {
    int n;
    double probability;
};

/// Probabilities over the total emitted photon number. Only counts with
/// nonzero probability are listed. `weight` is the unconditioned squared norm
/// of the emission amplitude, so weight * p_n is the absolute rate at this
/// order.
struct EmissionDistribution {
    std::vector<EmissionCount> counts;
    int order = 1;       ///< order in the coupling J
    int term = 0;        ///< 0 for the full amplitude, m for the (2m-1)-photon term
    double weight = 0.0;
    double leakage = 0.0;

    double probability(int n) const;
    double even_mass() const;
    double total() const;
};

/// Largest coupling for which a single insertion is treated as meaningful.
inline constexpr double max_coupling = 0.5;

/// The photon vacuum the charge meets: the in-vacuum written in out-quanta.
FockState radiation_vacuum(cplx gamma, int cutoff, PairLayout layout = PairLayout::pair);

/// (J a+_k + conj(J) a_k) applied once to the squeezed in-vacuum.
FockState emission_amplitude(cplx J, cplx gamma, int cutoff, PairLayout layout = PairLayout::pair);

/// Distribution of total photon number in the single-insertion amplitude.
/// Every count in the support is odd.
EmissionDistribution first_order_amplitudes(cplx J, cplx gamma, int cutoff,
                                            PairLayout layout = PairLayout::pair);

/// Term m of the expansion in vacuum pairs: the current photon on top of m-1
/// pairs, together with the absorption of one photon out of m pairs. Term m
/// lives entirely in the (2m-1)-photon sector. Terms for m = 1..max_pairs.
std::vector<FockState> higher_order_amplitudes(cplx J, cplx gamma, int max_pairs, int cutoff,
                                               PairLayout layout = PairLayout::pair);

std::vector<EmissionDistribution> higher_order_terms(cplx J, cplx gamma, int max_pairs, int cutoff,
                                                     PairLayout layout = PairLayout::pair);

/// Distribution of the coherent sum of term amplitudes.
EmissionDistribution resum_terms(std::span<const FockState> terms);

/// Distribution of an arbitrary amplitude vector over total photon number.
EmissionDistribution distribution_of(const FockState& amplitude);

struct CorrelationSummary {
    std::uint64_t events = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> histogram;  ///< events per photon count n
    double p_odd = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    /// <n(n-1)> - <n>^2: covariance of photon pairs within one event,
    /// zero for Poissonian counts.
    double pair_covariance = 0.0;
    /// <n(n-1)> / <n>^2
    double g2 = 0.0;
    double fraction_three_or_more = 0.0;
    double p3_over_p1 = 0.0;
};

/// Events per independently seeded chunk. Fixed so that results do not depend
/// on the worker count.
inline constexpr std::uint64_t sampling_chunk = 4096;

/// Draws `events` photon counts from `dist`. Chunk c uses an mt19937_64 seeded
/// with seed_seq{seed low, seed high, c}; results are bit-reproducible for a
/// given (seed, events) regardless of `workers`.
CorrelationSummary sample_arrival_correlations(const EmissionDistribution& dist,
                                               std::uint64_t events, std::uint64_t seed,
                                               int workers = 1);

/// Columns n, probability (nonzero rows only).
void write_emission_csv(std::ostream& out, const EmissionDistribution& dist);
/// key,value block.
void write_correlation_summary(std::ostream& out, const CorrelationSummary& summary);

}  // namespace vacrad

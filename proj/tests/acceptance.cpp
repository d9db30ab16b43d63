// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: vacrad_acceptance <path to the vacrad executable>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "vacrad/bogolubov.hpp"
#include "vacrad/fock.hpp"
#include "vacrad/gupta_bleuler.hpp"
#include "vacrad/modes.hpp"
#include "vacrad/radiation.hpp"
#include "vacrad/spectrum.hpp"

using namespace vacrad;
namespace fs = std::filesystem;

namespace {

constexpr double epsilon_in = 1.0;
constexpr double epsilon_out = 1.69;
constexpr double rel_tol = 1e-10;

// Largest relative current drift seen by any integration in criteria 1-3.
double worst_drift = 0.0;
int drift_integrations = 0;

BogolubovPair solve(double k, const DielectricProfile& profile)
{
    const auto sol = evolve_mode(k, profile, rel_tol);
    worst_drift = std::max(worst_drift, sol.max_current_drift);
    ++drift_integrations;
    return extract(sol, profile);
}

double coefficient_error(const BogolubovPair& a, const BogolubovPair& b)
{
    return std::max(std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta));
}

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome normalization()
{
    const auto grid = make_k_grid(0.1, 10.0, 50, GridSpacing::linear);
    double worst = 0.0;
    const auto start = std::chrono::steady_clock::now();
    for (double tau : {0.1, 1.0, 10.0}) {
        const auto p = DielectricProfile::tanh(epsilon_in, epsilon_out, 0.0, tau);
        for (double k : grid) worst = std::max(worst, std::abs(solve(k, p).normalization_residual()));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst < 1e-8 && seconds < 30.0,
            fmt::format("max ||alpha|^2-|beta|^2-1| = {:.3g} over 150 modes in {:.2f} s", worst, seconds)};
}

Outcome sudden_limit()
{
    const auto oracle = sudden_coefficients(epsilon_in, epsilon_out, 1.0);
    std::vector<double> errors;
    for (double tau = 1e-3; errors.size() < 4; tau /= 2) {
        const auto pair = solve(1.0, DielectricProfile::tanh(epsilon_in, epsilon_out, 0.0, tau));
        errors.push_back(coefficient_error(pair, oracle));
    }
    bool pass = errors[0] < 1e-3;
    std::string ratios;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double r = errors[i - 1] / errors[i];
        pass = pass && r >= 1.8;
        ratios += fmt::format("{}{:.3f}", i > 1 ? ", " : "", r);
    }
    return {pass, fmt::format("error {:.3g} at tau=1e-3, halving ratios {}", errors[0], ratios)};
}

Outcome adiabatic()
{
    std::vector<double> occupations;
    for (double tau : {0.3, 1.0, 3.0, 10.0})
        occupations.push_back(solve(1.0, DielectricProfile::tanh(epsilon_in, epsilon_out, 0.0, tau)).occupation());
    bool decreasing = true;
    for (std::size_t i = 1; i < occupations.size(); ++i) decreasing = decreasing && occupations[i] < occupations[i - 1];
    return {decreasing && occupations.back() < 1e-6,
            fmt::format("|beta|^2 = {:.3g}, {:.3g}, {:.3g}, {:.3g}", occupations[0], occupations[1],
                        occupations[2], occupations[3])};
}

Outcome conservation()
{
    return {drift_integrations > 0 && worst_drift < 1e-8,
            fmt::format("max drift {:.3g} over {} integrations", worst_drift, drift_integrations)};
}

Outcome pair_law()
{
    const int cutoff = 40;
    const ModeRegistry reg({{"j", Polarization::transverse, cutoff}, {"-j", Polarization::transverse, cutoff}});
    const SqueezePair sp{"j", "-j", cplx(0.5, 0.0)};  // |gamma|^2 = 0.25
    const auto state = squeezed_in_vacuum(std::span(&sp, 1), reg);
    const auto pairs = pair_distribution(state, "j", "-j");
    double worst = 0.0;
    for (int n = 0; n <= 15; ++n)
        worst = std::max(worst, std::abs(pairs[static_cast<std::size_t>(n)] - 0.75 * std::pow(0.25, n)));
    const auto photons = photon_number_distribution(state);
    double odd = 0.0;
    for (std::size_t n = 1; n < photons.size(); n += 2) odd += photons[n];
    const double norm_error = std::abs(state.positive_norm_sq() - 1.0);
    return {worst < 1e-10 && odd < 1e-12 && norm_error < 1e-10,
            fmt::format("max |P(n)-law| = {:.3g}, odd mass {:.3g}, norm error {:.3g}", worst, odd, norm_error)};
}

Outcome odd_selection()
{
    const int cutoff = 30;
    const auto direct = first_order_amplitudes(0.3, 0.13, cutoff);
    const auto terms = higher_order_amplitudes(0.3, 0.13, (cutoff - 6) / 2, cutoff);
    const auto sum = resum_terms(terms);
    double worst = 0.0;
    for (int n = 0; n <= 2 * cutoff; ++n) worst = std::max(worst, std::abs(sum.probability(n) - direct.probability(n)));
    return {direct.even_mass() < 1e-12 && direct.probability(3) > 0.0 && worst < 1e-10,
            fmt::format("even mass {:.3g}, p3 = {:.4g}, resum difference {:.3g}", direct.even_mass(),
                        direct.probability(3), worst)};
}

FockState random_state(const ModeRegistry& reg, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> amps(reg.dimension());
    for (auto& c : amps) c = {g(rng), g(rng)};
    return FockState(reg, std::move(amps)).normalized();
}

Outcome gupta_bleuler()
{
    const ModeRegistry reg({{"a3", Polarization::longitudinal, 30}, {"a0", Polarization::scalar, 30}});
    const auto pair = sudden_coefficients(epsilon_in, epsilon_out, 1.0);
    const UnphysicalPair up{"a3", "a0", calibrated_coherent_ratio(pair)};
    const auto coherent = build_unphysical_state(std::span(&up, 1), reg);
    const double vac = std::abs(check_creation_constraint(FockState::vacuum(reg), "a3", "a0").residual_indefinite_norm);
    const double cal = std::abs(check_creation_constraint(coherent, "a3", "a0").residual_indefinite_norm);

    bool eq20_zero = true;
    double weakest_control = INFINITY;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto psi = random_state(reg, seed);
        const auto r = check_out_annihilation(psi, pair.alpha, pair.beta, 1.0, "a3");
        eq20_zero = eq20_zero && r.residual_indefinite_norm == 0.0 && r.residual_positive_norm == 0.0;
        weakest_control = std::min(
            {weakest_control, std::abs(check_creation_constraint(psi, "a3", "a0").residual_indefinite_norm),
             std::abs(check_per_mode_constraint(psi, pair.alpha, pair.beta, "a3").residual_indefinite_norm),
             std::abs(check_lorentz_condition(psi, "a3", "a0").residual_indefinite_norm)});
    }
    return {vac < 1e-10 && cal < 1e-10 && eq20_zero && weakest_control > 1e-2,
            fmt::format("eq24 vacuum {:.3g}, calibrated {:.3g}; eq20 at eps=1 {}; smallest random residual {:.3g}",
                        vac, cal, eq20_zero ? "exactly 0" : "nonzero", weakest_control)};
}

Outcome flat_spectrum()
{
    const auto grid = make_k_grid(0.1, 10.0, 50, GridSpacing::linear);
    const auto table = build_spectrum(DielectricProfile::step(epsilon_in, epsilon_out), grid, rel_tol, 1.0, 1);
    double lo = INFINITY, hi = -INFINITY;
    bool ok = true;
    for (const auto& row : table.rows) {
        ok = ok && row.ok;
        lo = std::min(lo, row.occupation);
        hi = std::max(hi, row.occupation);
    }
    const double oracle = sudden_coefficients(epsilon_in, epsilon_out, 1.0).occupation();
    return {ok && hi - lo < 1e-6 && std::abs(lo - 0.01731) < 5e-6 && std::abs(lo - oracle) < 1e-8,
            fmt::format("N_k in [{:.10f}, {:.10f}], spread {:.3g}, sudden value {:.10f}", lo, hi, hi - lo, oracle)};
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string quoted(const fs::path& p)
{
    return "'" + p.string() + "'";
}

Outcome determinism(const fs::path& cli)
{
    const auto root = fs::temp_directory_path() / "vacrad_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    std::vector<std::string> bodies, summaries;
    for (const auto& [name, workers] : {std::pair{"first", 1}, std::pair{"second", 3}}) {
        const auto dir = root / name;
        const auto cmd = fmt::format("{} radiate -o {} -j {} -s radiation.seed=20260 -s radiation.events=200000 "
                                     "-s radiation.gamma=0.35,0.1 > {} 2>&1",
                                     quoted(cli), quoted(dir), workers, quoted(root / (std::string(name) + ".log")));
        if (std::system(cmd.c_str()) != 0) return {false, fmt::format("'{}' failed", cmd)};
        bodies.push_back(slurp(dir / "distribution.csv"));
        summaries.push_back(slurp(dir / "correlations.csv"));
    }
    const bool identical = !bodies[0].empty() && bodies[0] == bodies[1] && summaries[0] == summaries[1];

    std::map<std::string, std::string> kv;
    std::istringstream in(summaries[0]);
    for (std::string line; std::getline(in, line);) {
        const auto comma = line.find(',');
        if (comma != std::string::npos) kv[line.substr(0, comma)] = line.substr(comma + 1);
    }
    bool all_odd = true;
    std::uint64_t counted = 0;
    for (const auto& [key, value] : kv) {
        if (key.rfind("count_", 0) != 0) continue;
        all_odd = all_odd && std::stoi(key.substr(6)) % 2 == 1;
        counted += std::stoull(value);
    }
    const bool p_odd_one = kv.count("p_odd") && std::stod(kv["p_odd"]) == 1.0;
    return {identical && all_odd && p_odd_one && counted == 200000,
            fmt::format("outputs {}; {} sampled events, all counts odd: {}, p_odd = {}",
                        identical ? "byte-identical" : "differ", counted, all_odd ? "yes" : "no",
                        kv.count("p_odd") ? kv["p_odd"] : "missing")};
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::cerr << "usage: vacrad_acceptance <path to vacrad>\n";
        return 2;
    }
    const fs::path cli = argv[1];
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Bogolubov normalization", normalization},
        {"sudden-limit oracle", sudden_limit},
        {"adiabatic suppression", adiabatic},
        {"current conservation", conservation},
        {"squeezed-vacuum pair law", pair_law},
        {"odd-photon selection rule", odd_selection},
        {"Gupta-Bleuler residuals", gupta_bleuler},
        {"flat sudden spectrum", flat_spectrum},
        {"determinism", [&] { return determinism(cli); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << fmt::format("criterion {} ({}): {} - {}\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                                 o.detail)
                  << std::flush;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

#include "vacrad/cli.hpp"

#include <array>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vacrad/bogolubov.hpp"
#include "vacrad/error.hpp"
#include "vacrad/gupta_bleuler.hpp"
#include "vacrad/modes.hpp"
#include "vacrad/parallel.hpp"
#include "vacrad/radiation.hpp"
#include "vacrad/spectrum.hpp"

namespace vacrad {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 7> subcommand_names{
    "profile", "modes", "bogolubov", "spectrum", "squeeze", "constraints", "radiate"};

// Artifacts and notes produced by one subcommand.
struct Run {
    const RunConfig& config;
    fs::path directory;
    int workers;
    std::ostream& log;
    std::vector<std::string> artifacts;
    std::vector<std::string> notes;
    int status = exit_ok;

    void write(const std::string& name, const std::function<void(std::ostream&)>& body)
    {
        std::ofstream out(directory / name, std::ios::binary);
        if (!out) throw ConfigError(fmt::format("cannot write '{}'", (directory / name).string()));
        body(out);
        if (!out) throw ConfigError(fmt::format("error while writing '{}'", (directory / name).string()));
        artifacts.push_back(name);
    }

    void note(std::string text)
    {
        log << "vacrad: " << text << '\n';
        notes.push_back(std::move(text));
    }

    void fail_numerically(std::string text)
    {
        note(std::move(text));
        status = exit_numerical;
    }
};

std::pair<double, double> time_window(const RunConfig& c, const DielectricProfile& p)
{
    auto [lo, hi] = p.asymptotic_window(asymptotic_threshold);
    return {c.solver.t_start.value_or(lo), c.solver.t_end.value_or(hi)};
}

BogolubovPair pair_at(const RunConfig& c, const DielectricProfile& p, double k)
{
    const auto [t0, t1] = time_window(c, p);
    return extract(evolve_mode(k, p, t0, t1, c.solver.rel_tol), p);
}

cplx resolve_gamma(Run& run, const DielectricProfile& p)
{
    if (run.config.radiation.gamma) return *run.config.radiation.gamma;
    const auto pair = pair_at(run.config, p, run.config.solver.k);
    const cplx g = gamma_ratio(pair);
    run.note(fmt::format("gamma = conj(beta/alpha) at k = {:g}: {:.6g}{:+.6g}i", run.config.solver.k,
                         g.real(), g.imag()));
    return g;
}

void write_key_values(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows)
{
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

// -- subcommands -------------------------------------------------------------

void run_profile(Run& run)
{
    const auto p = make_profile(run.config);
    auto [lo, hi] = p.asymptotic_window(asymptotic_threshold);
    if (p.kind() == ProfileKind::tanh) {
        lo = std::min(lo, p.t0() - 5.0 * p.tau());
        hi = std::max(hi, p.t0() + 5.0 * p.tau());
    }
    const int n = run.config.profile.plot_points;
    run.write("profile.csv", [&](std::ostream& out) {
        out << "t,epsilon\n";
        for (int i = 0; i < n; ++i) {
            const double t = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
            fmt::print(out, "{:.17g},{:.17g}\n", t, p.evaluate(t));
        }
    });
}

void run_modes(Run& run)
{
    const auto& c = run.config;
    const auto p = make_profile(c);
    const auto [t0, t1] = time_window(c, p);
    const auto sol = evolve_mode(c.solver.k, p, t0, t1, c.solver.rel_tol);
    run.write("trajectory.csv", [&](std::ostream& out) { write_trajectory_csv(out, sol, p); });
    const auto pair = extract(sol, p);
    run.write("mode_summary.csv", [&](std::ostream& out) {
        write_key_values(out, {{"k", g17(sol.k)},
                               {"t_start", g17(sol.t_start)},
                               {"t_end", g17(sol.t_end)},
                               {"rel_tol", g17(sol.tolerance_used)},
                               {"points", std::to_string(sol.trajectory.size())},
                               {"max_current_drift", g17(sol.max_current_drift)},
                               {"beta_sq", g17(pair.occupation())},
                               {"normalization_residual", g17(pair.normalization_residual())}});
    });
}

void run_bogolubov(Run& run)
{
    const auto& c = run.config;
    const auto p = make_profile(c);
    const auto grid = make_k_grid(c.grid.k_min, c.grid.k_max, c.grid.points, c.grid.spacing);
    std::vector<BogolubovPair> pairs(grid.size());
    parallel_for(grid.size(), run.workers, [&](std::size_t i) { pairs[i] = pair_at(c, p, grid[i]); });
    run.write("bogolubov.csv", [&](std::ostream& out) { write_bogolubov_csv(out, pairs); });
}

void run_spectrum(Run& run)
{
    const auto& c = run.config;
    const auto p = make_profile(c);
    const auto grid = make_k_grid(c.grid.k_min, c.grid.k_max, c.grid.points, c.grid.spacing);
    const auto table = build_spectrum(p, grid, c.solver.rel_tol, c.spectrum.volume, run.workers);
    run.write("spectrum.csv",
              [&](std::ostream& out) { write_spectrum_csv(out, table, c.spectrum.ev_per_unit); });
    const auto energy = total_energy(table);
    const auto band = band_fraction(table, c.spectrum.band_lo, c.spectrum.band_hi, c.spectrum.ev_per_unit);
    run.write("energy.csv", [&](std::ostream& out) {
        write_key_values(out, {{"total_energy", g17(energy.energy)},
                               {"k_max", g17(energy.k_max)},
                               {"volume", g17(c.spectrum.volume)},
                               {"ev_per_unit", g17(c.spectrum.ev_per_unit)},
                               {"band_lo", g17(c.spectrum.band_lo)},
                               {"band_hi", g17(c.spectrum.band_hi)},
                               {"band_fraction", g17(band.fraction)}});
    });
    if (!energy.warning.empty()) run.note(energy.warning);
    if (!band.warning.empty()) run.note(band.warning);
    for (const auto& row : table.rows)
        if (!row.ok) run.fail_numerically(fmt::format("k = {:g}: {}", row.k, row.error));
}

void run_squeeze(Run& run)
{
    const auto& c = run.config;
    const auto p = make_profile(c);
    const cplx gamma = resolve_gamma(run, p);
    const auto state = radiation_vacuum(gamma, c.fock.cutoff, c.radiation.layout);
    const auto photons = photon_number_distribution(state);
    run.write("squeeze_photons.csv", [&](std::ostream& out) { write_distribution_csv(out, photons); });
    if (c.radiation.layout == PairLayout::pair) {
        const auto pairs = pair_distribution(state, "k", "-k");
        run.write("squeeze_pairs.csv", [&](std::ostream& out) { write_distribution_csv(out, pairs); });
    }
    double odd = 0.0;
    for (std::size_t n = 1; n < photons.size(); n += 2) odd += photons[n];
    run.write("squeeze_summary.csv", [&](std::ostream& out) {
        write_key_values(out, {{"re_gamma", g17(gamma.real())},
                               {"im_gamma", g17(gamma.imag())},
                               {"layout", std::string(to_string(c.radiation.layout))},
                               {"cutoff", std::to_string(c.fock.cutoff)},
                               {"norm", g17(state.positive_norm_sq())},
                               {"leakage", g17(state.leakage())},
                               {"odd_mass", g17(odd)}});
    });
}

void run_constraints(Run& run)
{
    const auto& c = run.config;
    const auto p = make_profile(c);
    const auto pair = pair_at(c, p, c.solver.k);
    const ModeRegistry reg({{"a3", Polarization::longitudinal, c.fock.cutoff},
                            {"a0", Polarization::scalar, c.fock.cutoff}});
    const double eps_f = p.epsilon_final();

    struct Candidate {
        std::string name;
        cplx coherent;
    };
    const std::vector<Candidate> candidates{
        {"vacuum", 0.0},
        {"calibrated", calibrated_coherent_ratio(pair, c.fock.gamma_calibration)},
        {"uncalibrated", coherent_ratio(pair)}};

    std::vector<std::pair<std::string, ConstraintReport>> rows;
    for (const auto& cand : candidates) {
        const UnphysicalPair up{"a3", "a0", cand.coherent};
        const auto state = build_unphysical_state(std::span(&up, 1), reg);
        const std::vector<ModeCoefficients> both{{"a3", pair.alpha, pair.beta}, {"a0", pair.alpha, pair.beta}};
        std::vector<ConstraintReport> reports{
            check_lorentz_condition(state, "a3", "a0"),
            check_per_mode_constraint(state, pair.alpha, pair.beta, "a3"),
            check_per_mode_constraint(state, pair.alpha, pair.beta, "a0"),
            check_aggregate_constraint(state, both),
            check_out_annihilation(state, pair.alpha, pair.beta, eps_f, "a3"),
            check_out_annihilation(state, pair.alpha, pair.beta, eps_f, "a0"),
            check_creation_constraint(state, "a3", "a0")};
        for (auto& r : reports) {
            r.parameters = {eps_f, pair.alpha, pair.beta, cand.coherent};
            if (cand.name == "calibrated" && !r.pass)
                run.fail_numerically(fmt::format("calibrated state fails {} on {} (indefinite {:.3e}, positive {:.3e})",
                                                 to_string(r.id), r.mode, r.residual_indefinite_norm,
                                                 r.residual_positive_norm));
            rows.emplace_back(cand.name, r);
        }
    }
    run.write("constraints.csv", [&](std::ostream& out) {
        out << "state,";
        write_constraint_header(out);
        for (const auto& [name, r] : rows) {
            out << name << ',';
            write_constraint_row(out, r);
        }
    });
}

void run_radiate(Run& run)
{
    const auto& c = run.config;
    const auto p = make_profile(c);
    const cplx gamma = resolve_gamma(run, p);
    const cplx J = std::polar(c.radiation.coupling, c.radiation.coupling_phase);
    const auto dist = first_order_amplitudes(J, gamma, c.fock.cutoff, c.radiation.layout);
    run.write("distribution.csv", [&](std::ostream& out) { write_emission_csv(out, dist); });

    const auto terms = higher_order_terms(J, gamma, c.radiation.max_pairs, c.fock.cutoff, c.radiation.layout);
    run.write("terms.csv", [&](std::ostream& out) {
        out << "term,n,weight\n";
        for (const auto& t : terms) fmt::print(out, "{},{},{:.17g}\n", t.term, 2 * t.term - 1, t.weight);
    });

    const auto summary = sample_arrival_correlations(dist, c.radiation.events, c.radiation.seed, run.workers);
    run.write("correlations.csv", [&](std::ostream& out) { write_correlation_summary(out, summary); });
    if (dist.even_mass() > 1e-12)
        run.fail_numerically(fmt::format("even-photon mass {:.3e} exceeds 1e-12", dist.even_mass()));
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

void write_manifest(const Run& run, std::string_view subcommand, double seconds, const std::string& error)
{
    std::ofstream out(run.directory / "manifest.txt", std::ios::binary);
    out << "[run]\n";
    fmt::print(out, "tool = vacrad\nversion = {}\nsubcommand = {}\nworkers = {}\nstatus = {}\n",
               tool_version, subcommand, run.workers, run.status);
    std::string list;
    for (const auto& a : run.artifacts) list += (list.empty() ? "" : " ") + a;
    fmt::print(out, "artifacts = {}\n", list);
    for (const auto& n : run.notes) fmt::print(out, "note = {}\n", n);
    if (!error.empty()) fmt::print(out, "error = {}\n", error);
    fmt::print(out, "elapsed_seconds = {:.6f}\n", seconds);
    fmt::print(out, "timestamp = {}\n\n", utc_timestamp());
    out << emit_config(run.config);
}

}  // namespace

std::span<const std::string_view> subcommands() { return subcommand_names; }

fs::path resolve_output_directory(const RunConfig& config)
{
    if (!config.output.directory.empty()) return config.output.directory;
    if (const char* env = std::getenv(output_dir_env); env && *env) return env;
    return "vacrad-out";
}

DielectricProfile make_profile(const RunConfig& config)
{
    const auto& p = config.profile;
    switch (p.kind) {
    case ProfileKind::step: return DielectricProfile::step(p.epsilon_initial, p.epsilon_final, p.t0);
    case ProfileKind::tanh: return DielectricProfile::tanh(p.epsilon_initial, p.epsilon_final, p.t0, p.tau);
    case ProfileKind::tabulated: return DielectricProfile::tabulated(read_profile_table(p.table), p.t0);
    }
    throw ConfigError("unknown profile kind");
}

int run(std::string_view subcommand, const RunConfig& config, int workers, std::ostream& log)
{
    using Handler = void (*)(Run&);
    Handler handler = nullptr;
    if (subcommand == "profile") handler = run_profile;
    if (subcommand == "modes") handler = run_modes;
    if (subcommand == "bogolubov") handler = run_bogolubov;
    if (subcommand == "spectrum") handler = run_spectrum;
    if (subcommand == "squeeze") handler = run_squeeze;
    if (subcommand == "constraints") handler = run_constraints;
    if (subcommand == "radiate") handler = run_radiate;
    if (!handler) {
        log << "vacrad: unknown subcommand '" << subcommand << "'\n";
        return exit_usage;
    }

    try {
        validate(config);
    } catch (const Error& e) {
        log << "vacrad: config error: " << e.what() << '\n';
        return exit_usage;
    }

    const fs::path dir = resolve_output_directory(config);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        log << "vacrad: cannot create output directory '" << dir.string() << "': " << ec.message() << '\n';
        return exit_usage;
    }

    Run state{config, dir, std::max(workers, 1), log, {}, {}, exit_ok};
    const auto started = std::chrono::steady_clock::now();
    std::string error;
    try {
        handler(state);
    } catch (const NumericalFailure& e) {
        error = e.what();
        state.status = exit_numerical;
    } catch (const Error& e) {
        error = e.what();
        state.status = exit_usage;
    }
    if (!error.empty()) log << "vacrad: " << subcommand << ": " << error << '\n';
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest(state, subcommand, seconds, error);
    return state.status;
}

}  // namespace vacrad

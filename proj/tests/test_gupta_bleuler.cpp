#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "vacrad/error.hpp"
#include "vacrad/gupta_bleuler.hpp"

using namespace vacrad;

namespace {

ModeRegistry gb_registry(int cutoff)
{
    return ModeRegistry({{"a3", Polarization::longitudinal, cutoff}, {"a0", Polarization::scalar, cutoff}});
}

FockState random_state(const ModeRegistry& reg, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> amps(reg.dimension());
    for (auto& c : amps) c = {g(rng), g(rng)};
    return FockState(reg, std::move(amps)).normalized();
}

// Explicit matrix-action oracle on a (cutoff+1)^2 grid indexed [n3][n0]:
// builds exp(G a3+^2 - G a0+^2)|0> from its closed-form coefficients and
// applies (alpha a + conj(beta) a+) on one mode with a|n> = s sqrt(n)|n-1>.
struct Grid {
    int size;
    std::vector<cplx> v;
    cplx& at(int n3, int n0) { return v[static_cast<std::size_t>(n3 * size + n0)]; }
    cplx at(int n3, int n0) const { return v[static_cast<std::size_t>(n3 * size + n0)]; }
};

Grid oracle_state(cplx G, int cutoff)
{
    // exp(G a+^2)|0> = sum_m G^m sqrt((2m)!)/m! |2m>
    const int size = cutoff + 1;
    std::vector<cplx> c3(static_cast<std::size_t>(size)), c0(static_cast<std::size_t>(size));
    for (int m = 0; 2 * m <= cutoff; ++m) {
        const double w = std::exp(0.5 * std::lgamma(2.0 * m + 1) - std::lgamma(m + 1.0));
        c3[static_cast<std::size_t>(2 * m)] = std::pow(G, m) * w;
        c0[static_cast<std::size_t>(2 * m)] = std::pow(-G, m) * w;
    }
    Grid g{size, std::vector<cplx>(static_cast<std::size_t>(size * size))};
    double norm = 0.0;
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b) {
            g.at(a, b) = c3[static_cast<std::size_t>(a)] * c0[static_cast<std::size_t>(b)];
            norm += std::norm(g.at(a, b));
        }
    for (auto& x : g.v) x /= std::sqrt(norm);
    return g;
}

// Indefinite and interior positive norm of (alpha a + conj(beta) a+) on mode 3
// (scalar = false) or mode 0 (scalar = true).
std::pair<double, double> oracle_residual(const Grid& psi, cplx alpha, cplx beta, bool scalar)
{
    const int size = psi.size;
    Grid r{size, std::vector<cplx>(psi.v.size())};
    const double s = scalar ? -1.0 : 1.0;
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b) {
            const int n = scalar ? b : a;
            const cplx amp = psi.at(a, b);
            if (n > 0) {
                const int a2 = scalar ? a : a - 1, b2 = scalar ? b - 1 : b;
                r.at(a2, b2) += alpha * s * std::sqrt(double(n)) * amp;
            }
            if (n + 1 < size) {
                const int a2 = scalar ? a : a + 1, b2 = scalar ? b + 1 : b;
                r.at(a2, b2) += std::conj(beta) * std::sqrt(double(n + 1)) * amp;
            }
        }
    double ind = 0.0, pos = 0.0;
    for (int a = 0; a + 1 < size; ++a)
        for (int b = 0; b + 1 < size; ++b) {
            ind += (b % 2 ? -1.0 : 1.0) * std::norm(r.at(a, b));
            pos += std::norm(r.at(a, b));
        }
    return {ind, std::sqrt(pos)};
}

}  // namespace

TEST_CASE("unphysical state construction")
{
    const auto reg = gb_registry(12);
    const UnphysicalPair none{"a3", "a0", 0.0};
    const auto vac = build_unphysical_state(std::span(&none, 1), reg);
    CHECK(vac.amplitudes()[0] == cplx(1.0));
    CHECK(vac.positive_norm_sq() == doctest::Approx(1.0));

    const UnphysicalPair some{"a3", "a0", cplx(0.1, -0.05)};
    const auto s = build_unphysical_state(std::span(&some, 1), reg);
    for (std::size_t i = 0; i < reg.dimension(); ++i)
        if (reg.occupation(i, 0) % 2 || reg.occupation(i, 1) % 2) CHECK(s.amplitudes()[i] == cplx{});

    const UnphysicalPair wide{"a3", "a0", 0.5};
    CHECK_THROWS_AS(build_unphysical_state(std::span(&wide, 1), reg), DomainError);
    const UnphysicalPair swapped{"a0", "a3", 0.1};
    CHECK_THROWS_AS(build_unphysical_state(std::span(&swapped, 1), reg), UsageError);
}

TEST_CASE("calibrated coherent state matches the matrix oracle")
{
    const int cutoff = 30;
    const auto pair = sudden_coefficients(1.0, 1.69, 1.0);
    const cplx G = calibrated_coherent_ratio(pair);
    CHECK(std::abs(G - (-std::conj(pair.beta) / (2.0 * pair.alpha))) < 1e-16);

    const auto reg = gb_registry(cutoff);
    const UnphysicalPair up{"a3", "a0", G};
    const auto psi = build_unphysical_state(std::span(&up, 1), reg);
    const auto grid = oracle_state(G, cutoff);
    for (std::size_t i = 0; i < reg.dimension(); ++i)
        CHECK(std::abs(psi.amplitudes()[i] - grid.at(reg.occupation(i, 0), reg.occupation(i, 1))) < 1e-14);

    for (bool scalar : {false, true}) {
        const auto [ind, pos] = oracle_residual(grid, pair.alpha, pair.beta, scalar);
        const auto report = check_per_mode_constraint(psi, pair.alpha, pair.beta, scalar ? "a0" : "a3");
        CHECK(report.pass);
        CHECK(report.id == ConstraintId::eq19_21);
        CHECK(std::abs(report.residual_indefinite_norm - ind) < 1e-14);
        CHECK(std::abs(report.residual_positive_norm - pos) < 1e-12);
        CHECK(pos < 1e-12);
    }
}

TEST_CASE("uncalibrated coherent ratio fails the per-mode constraint")
{
    const auto pair = sudden_coefficients(1.0, 1.69, 1.0);
    const auto reg = gb_registry(30);
    const UnphysicalPair up{"a3", "a0", coherent_ratio(pair)};
    const auto psi = build_unphysical_state(std::span(&up, 1), reg);
    const auto report = check_per_mode_constraint(psi, pair.alpha, pair.beta, "a3");
    CHECK_FALSE(report.pass);
    const auto [ind, pos] = oracle_residual(oracle_state(coherent_ratio(pair), 30), pair.alpha, pair.beta, false);
    CHECK(report.residual_positive_norm == doctest::Approx(pos).epsilon(1e-10));
    CHECK(report.residual_indefinite_norm == doctest::Approx(ind).epsilon(1e-10));
}

TEST_CASE("per-mode constraint on the vacuum and on random states")
{
    const auto reg = gb_registry(8);
    const auto vac = FockState::vacuum(reg);
    const auto r = check_per_mode_constraint(vac, 1.0, 0.0, "a3");
    CHECK(r.pass);
    CHECK(r.residual_indefinite_norm == 0.0);
    CHECK(r.residual_positive_norm == 0.0);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto bad = check_per_mode_constraint(random_state(reg, seed), cplx(1.1, 0.2), cplx(0.3, -0.4), "a3");
        CHECK_FALSE(bad.pass);
        CHECK(bad.residual_positive_norm > 0.1);
    }
}

TEST_CASE("eq20 out-region annihilation")
{
    const auto pair = sudden_coefficients(1.0, 1.69, 1.0);
    const auto reg = gb_registry(30);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto r = check_out_annihilation(random_state(reg, seed), pair.alpha, pair.beta, 1.0, "a3");
        CHECK(r.pass);
        CHECK(r.residual_indefinite_norm == 0.0);
        CHECK(r.residual_positive_norm == 0.0);
    }
    const UnphysicalPair up{"a3", "a0", calibrated_coherent_ratio(pair)};
    const auto psi = build_unphysical_state(std::span(&up, 1), reg);
    CHECK(check_out_annihilation(psi, pair.alpha, pair.beta, 1.69, "a3").pass);
    CHECK_FALSE(check_out_annihilation(FockState::vacuum(reg), pair.alpha, pair.beta, 1.69, "a3").pass);
    CHECK_THROWS_AS(check_out_annihilation(psi, pair.alpha, pair.beta, 0.5, "a3"), DomainError);
}

TEST_CASE("eq20 residual is linear in the prefactor")
{
    const auto reg = gb_registry(10);
    const auto psi = random_state(reg, 77);
    const cplx alpha(1.02, 0.1), beta(0.2, 0.05);
    const auto base = check_out_annihilation(psi, alpha, beta, 1.69, "a0");
    const double p0 = 1.0 - 1.3;
    for (double eps : {1.21, 2.0, 4.0, 9.0}) {
        const auto r = check_out_annihilation(psi, alpha, beta, eps, "a0");
        const double ratio = (1.0 - std::sqrt(eps)) / p0;
        CHECK(r.residual_positive_norm == doctest::Approx(std::abs(ratio) * base.residual_positive_norm).epsilon(1e-12));
        CHECK(r.residual_indefinite_norm == doctest::Approx(ratio * ratio * base.residual_indefinite_norm).epsilon(1e-12));
    }
}

TEST_CASE("eq24 creation constraint")
{
    const auto reg = gb_registry(30);
    const auto vac = check_creation_constraint(FockState::vacuum(reg), "a3", "a0");
    CHECK(vac.pass);
    CHECK(std::abs(vac.residual_indefinite_norm) < 1e-15);
    CHECK(vac.residual_positive_norm == doctest::Approx(std::sqrt(2.0)));

    const auto pair = sudden_coefficients(1.0, 1.69, 1.0);
    const UnphysicalPair up{"a3", "a0", calibrated_coherent_ratio(pair)};
    const auto psi = build_unphysical_state(std::span(&up, 1), reg);
    const auto r = check_creation_constraint(psi, "a3", "a0");
    CHECK(r.pass);
    CHECK(std::abs(r.residual_indefinite_norm) < 1e-10);

    const std::vector<int> only3{1, 0};
    const auto lone = check_creation_constraint(FockState::basis(reg, only3), "a3", "a0");
    CHECK_FALSE(lone.pass);
    CHECK(lone.residual_indefinite_norm == doctest::Approx(1.0));

    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        CHECK(std::abs(check_creation_constraint(random_state(reg, seed), "a3", "a0").residual_indefinite_norm) > 1e-2);
}

TEST_CASE("eq24 zero norm is stable under more paired squeezing")
{
    const ModeRegistry reg({{"a3", Polarization::longitudinal, 14},
                            {"a0", Polarization::scalar, 14},
                            {"b3", Polarization::longitudinal, 14},
                            {"b0", Polarization::scalar, 14}});
    std::vector<UnphysicalPair> pairs{{"a3", "a0", 0.05}};
    const double one = check_creation_constraint(build_unphysical_state(pairs, reg), "a3", "a0").residual_indefinite_norm;
    pairs.push_back({"b3", "b0", cplx(0.0, 0.04)});
    const double two = check_creation_constraint(build_unphysical_state(pairs, reg), "a3", "a0").residual_indefinite_norm;
    CHECK(std::abs(one) < 1e-10);
    CHECK(std::abs(two - one) < 1e-10);
}

TEST_CASE("eq16 Lorentz condition")
{
    const auto reg = gb_registry(30);
    CHECK(check_lorentz_condition(FockState::vacuum(reg), "a3", "a0").pass);
    const UnphysicalPair up{"a3", "a0", -0.065};
    const auto r = check_lorentz_condition(build_unphysical_state(std::span(&up, 1), reg), "a3", "a0");
    CHECK(r.pass);
    CHECK(r.id == ConstraintId::eq16);
    CHECK(std::abs(check_lorentz_condition(random_state(reg, 9), "a3", "a0").residual_indefinite_norm) > 1e-2);
}

TEST_CASE("per-mode constraints imply the aggregate constraint")
{
    const ModeRegistry reg({{"a3", Polarization::longitudinal, 14},
                            {"a0", Polarization::scalar, 14},
                            {"b3", Polarization::longitudinal, 14},
                            {"b0", Polarization::scalar, 14}});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> eps(1.0, 3.0);
    for (int trial = 0; trial < 4; ++trial) {
        const auto pa = sudden_coefficients(1.0, eps(rng), 1.0);
        const auto pb = sudden_coefficients(1.0, eps(rng), 2.0);
        const std::vector<UnphysicalPair> pairs{{"a3", "a0", calibrated_coherent_ratio(pa)},
                                                {"b3", "b0", calibrated_coherent_ratio(pb)}};
        const auto psi = build_unphysical_state(pairs, reg);
        const std::vector<ModeCoefficients> modes{{"a3", pa.alpha, pa.beta},
                                                  {"a0", pa.alpha, pa.beta},
                                                  {"b3", pb.alpha, pb.beta},
                                                  {"b0", pb.alpha, pb.beta}};
        bool all = true;
        for (const auto& m : modes) all = all && check_per_mode_constraint(psi, m.alpha, m.beta, m.mode).pass;
        if (all) CHECK(check_aggregate_constraint(psi, modes).pass);
        CHECK(all);
    }
    const std::vector<ModeCoefficients> generic{{"a3", 1.1, 0.4}, {"b0", 1.0, 0.2}};
    CHECK_FALSE(check_aggregate_constraint(random_state(reg, 3), generic).pass);
}

TEST_CASE("constraint CSV rows")
{
    const auto reg = gb_registry(6);
    std::ostringstream out;
    write_constraint_header(out);
    write_constraint_row(out, check_creation_constraint(FockState::vacuum(reg), "a3", "a0"));
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
    CHECK(row.rfind("eq24,", 0) == 0);
    CHECK(row.substr(row.size() - 4) == "PASS");
}

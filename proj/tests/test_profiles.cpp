#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "vacrad/error.hpp"
#include "vacrad/profiles.hpp"

using namespace vacrad;

TEST_CASE("step profile is right-continuous at t0")
{
    const auto p = DielectricProfile::step(1.0, 1.69, 0.0);
    CHECK(evaluate(p, -1.0) == 1.0);
    CHECK(evaluate(p, 0.0) == 1.69);
    CHECK(evaluate(p, 3.0) == 1.69);
    CHECK(p.evaluate_left(0.0) == 1.0);
    REQUIRE(p.breakpoints().size() == 1);
    CHECK(p.breakpoints()[0] == 0.0);
}

TEST_CASE("tanh profile midpoint and constant case")
{
    CHECK(evaluate(DielectricProfile::tanh(1.0, 1.69, 0.0, 1.0), 0.0) == doctest::Approx(1.345).epsilon(1e-15));
    CHECK(evaluate(DielectricProfile::tanh(1.0, 1.69, 2.5, 0.3), 2.5) == doctest::Approx(1.345).epsilon(1e-15));
    const auto flat = DielectricProfile::tanh(1.0, 1.0, 0.0, 1.0);
    for (double t : {-100.0, -1.0, 0.0, 0.5, 1e3}) CHECK(evaluate(flat, t) == 1.0);
    CHECK(flat.is_constant());
}

TEST_CASE("tanh profile matches the closed form")
{
    const auto p = DielectricProfile::tanh(1.2, 2.0, 0.7, 0.4);
    for (double t = -3.0; t <= 3.0; t += 0.37) {
        const double expect = 1.2 + 0.8 * 0.5 * (1.0 + std::tanh((t - 0.7) / 0.4));
        CHECK(evaluate(p, t) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("asymptotic recovery beyond 50 tau")
{
    for (double tau : {1e-3, 0.1, 1.0, 10.0}) {
        for (double t0 : {-2.0, 0.0, 5.0}) {
            const auto up = DielectricProfile::tanh(1.0, 1.69, t0, tau);
            CHECK(std::abs(evaluate(up, t0 - 50 * tau) - 1.0) < 1e-12);
            CHECK(std::abs(evaluate(up, t0 + 50 * tau) - 1.69) < 1e-12);
            const auto down = DielectricProfile::tanh(2.25, 1.0, t0, tau);
            CHECK(std::abs(evaluate(down, t0 - 50 * tau) - 2.25) < 1e-12);
            CHECK(std::abs(evaluate(down, t0 + 50 * tau) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("tanh profile is monotone through the transition")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> eps(1.0, 4.0), tau(1e-2, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = eps(rng);
        const double b = a + eps(rng) - 0.999;
        const double s = tau(rng);
        const auto p = DielectricProfile::tanh(a, b, 0.0, s);
        double prev = evaluate(p, -5 * s);
        for (int i = 1; i <= 400; ++i) {
            const double cur = evaluate(p, -5 * s + i * 10 * s / 400);
            CHECK(cur >= prev);
            CHECK(cur >= 1.0);
            prev = cur;
        }
    }
}

TEST_CASE("asymptotic window brackets the transition")
{
    const auto p = DielectricProfile::tanh(1.0, 1.69, 1.0, 0.5);
    const auto [lo, hi] = p.asymptotic_window();
    CHECK(lo < 1.0);
    CHECK(hi > 1.0);
    CHECK(std::abs(evaluate(p, lo) - 1.0) < 1e-10);
    CHECK(std::abs(evaluate(p, hi) - 1.69) < 1e-10);
}

TEST_CASE("invalid profiles are rejected")
{
    CHECK_THROWS_AS(DielectricProfile::step(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(DielectricProfile::tanh(1.0, 0.9, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(DielectricProfile::tanh(1.0, 1.5, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(DielectricProfile::tanh(1.0, 1.5, 0.0, -1.0), DomainError);
    CHECK_THROWS_AS(DielectricProfile::tabulated({{0.0, 1.0}, {0.0, 1.2}}), DomainError);
    CHECK_THROWS_AS(DielectricProfile::tabulated({{0.0, 1.0}, {1.0, 0.8}}), DomainError);
    CHECK_THROWS_AS(DielectricProfile::tabulated({{0.0, 1.0}}), DomainError);
}

TEST_CASE("tabulated profile interpolates and refuses to extrapolate")
{
    const auto p = DielectricProfile::tabulated({{-1.0, 1.0}, {0.0, 1.2}, {2.0, 1.6}});
    CHECK(p.epsilon_initial() == 1.0);
    CHECK(p.epsilon_final() == 1.6);
    CHECK(evaluate(p, -0.5) == doctest::Approx(1.1));
    CHECK(evaluate(p, 1.0) == doctest::Approx(1.4));
    CHECK(evaluate(p, 2.0) == doctest::Approx(1.6));
    CHECK_THROWS_AS(evaluate(p, -1.01), ExtrapolationError);
    CHECK_THROWS_AS(evaluate(p, 2.5), ExtrapolationError);
}

TEST_CASE("profile table file round trip")
{
    const auto path = std::filesystem::temp_directory_path() / "vacrad_profile_table.txt";
    {
        std::ofstream out(path);
        out << "# t eps\n-2 1.0\n\n0   1.3\n2 1.69\n";
    }
    const auto samples = read_profile_table(path);
    REQUIRE(samples.size() == 3);
    CHECK(samples[1].t == 0.0);
    CHECK(samples[1].epsilon == 1.3);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_profile_table(path), UsageError);
}

TEST_CASE("dispersion relation")
{
    CHECK(dispersion_omega(1.0, 1.0) == 1.0);
    CHECK(dispersion_omega(1.0, 1.69) == doctest::Approx(1.0 / 1.3).epsilon(1e-15));
    CHECK(dispersion_omega(2.0, 4.0) == 1.0);
    CHECK_THROWS_AS(dispersion_omega(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(dispersion_omega(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(dispersion_omega(1.0, 0.9), DomainError);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> k(1e-3, 1e3), eps(1.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double kk = k(rng), ee = eps(rng);
        CHECK(dispersion_omega(kk, ee) * std::sqrt(ee) == doctest::Approx(kk).epsilon(4e-16));
    }
}

TEST_CASE("profile kind names")
{
    for (auto kind : {ProfileKind::step, ProfileKind::tanh, ProfileKind::tabulated})
        CHECK(parse_profile_kind(to_string(kind)) == kind);
    CHECK_THROWS(parse_profile_kind("gaussian"));
}

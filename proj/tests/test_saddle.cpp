#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harvest/errors.hpp"
#include "harvest/saddle.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace harvest;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

DetectorConfig cfg(Scenario s, double kappa, double sigma, double omega, double L)
{
    DetectorConfig c;
    c.scenario = s;
    c.kappa = kappa;
    c.sigma = sigma;
    c.omega = omega;
    c.L = L;
    return c;
}
} // namespace

TEST_CASE("A closed form")
{
    CHECK(a_saddle(config_from_point(Scenario::ParallelAccel, 1, 1.25, 0.001)).v().real() ==
          Approx(4.42e-8).epsilon(1e-3));
    const double g = 0.02;
    CHECK(a_saddle(config_from_point(Scenario::ParallelAccel, 1, pi / 2, g)).v().real() ==
          Approx(g * g / 4 / (2 * pi)).epsilon(1e-14));
    CHECK(a_saddle(cfg(Scenario::Inertial, 0, 1, 3, 5)).v().real() == Approx(1 / (8 * pi * 9)).epsilon(1e-14));
}

TEST_CASE("A identical across accelerated scenarios")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> W(0.05, pi - 0.05), A(0.1, 4.4);
    for (int i = 0; i < 200; ++i) {
        const double w = W(rng), a = A(rng);
        const double ref = a_saddle(config_from_point(Scenario::ParallelAccel, a, w, 0.001)).v().real();
        for (Scenario s : {Scenario::AntiParallelAccel, Scenario::DeSitterComoving, Scenario::ThermalInertial})
            CHECK(std::abs(a_saddle(config_from_point(s, a, w, 0.001)).v().real() - ref) <= 1e-14 * ref);
    }
}

TEST_CASE("de sitter X is the parallel X times a phase")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> W(0.05, pi - 0.05), A(0.1, 4.4), G(1e-4, 0.1);
    for (int i = 0; i < 200; ++i) {
        const double w = W(rng), a = A(rng), g = G(rng);
        const cplx xp = x_saddle(config_from_point(Scenario::ParallelAccel, a, w, g)).v();
        const cplx xd = x_saddle(config_from_point(Scenario::DeSitterComoving, a, w, g)).v();
        CHECK(std::abs(std::abs(xd) - std::abs(xp)) <= 1e-14 * std::abs(xp));
        CHECK(std::abs(xd - xp * std::exp(-2.0 * I * w)) <= 1e-12 * std::abs(xp));
        CHECK(negativity_closed_form(Scenario::DeSitterComoving, a, w, g) ==
              negativity_closed_form(Scenario::ParallelAccel, a, w, g));
    }
}

TEST_CASE("antiparallel X diverges at the critical distance")
{
    const double w = 1.1;
    CHECK_THROWS_AS(x_saddle(config_from_point(Scenario::AntiParallelAccel, 2 * (1 - std::cos(w)), w, 0.01)),
                    ResonanceDivergence);
    CHECK_NOTHROW(x_saddle(config_from_point(Scenario::AntiParallelAccel, 1.0, w, 0.01)));
}

TEST_CASE("thermal X approaches parallel X as kappa -> 0")
{
    const auto th = cfg(Scenario::ThermalInertial, 1e-6, 1, 1e5, 2);
    const auto par = cfg(Scenario::ParallelAccel, 1e-6, 1, 1e5, 2);
    CHECK(x_saddle(th).v().real() == Approx(x_saddle(par).v().real()).epsilon(1e-9));
    CHECK(x_saddle(par).v().real() == Approx(-1 / (2 * pi) / 4).epsilon(1e-9));
}

TEST_CASE("criterion")
{
    auto r = criterion(Scenario::ParallelAccel, 1.9, pi / 2);
    CHECK(r.entangled);
    CHECK(r.lhs == Approx(0.95));
    CHECK(r.rhs == Approx(1.0));
    r = criterion(Scenario::ThermalInertial, 3.0, pi / 2);
    CHECK_FALSE(r.entangled);
    CHECK(r.lhs == Approx(1.5 * std::tanh(1.5)).epsilon(1e-14));
    CHECK(r.lhs == Approx(1.358).epsilon(1e-3));
    // L = 2 sigma^2 Omega sits on the boundary
    const auto in = criterion(cfg(Scenario::Inertial, 0, 1, 1.5, 3));
    CHECK(in.margin == Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(in.entangled);
    CHECK_THROWS_AS(criterion(Scenario::AntiParallelAccel, 1, 1), UnsupportedClosedForm);
}

TEST_CASE("closed form negativity")
{
    CHECK(negativity_closed_form(Scenario::ParallelAccel, 2 * std::sin(1.0), 1.0, 0.01) == 0.0);
    CHECK(negativity_closed_form(cfg(Scenario::Inertial, 0, 1, 1, 1)) == Approx(3 / (8 * pi)).epsilon(1e-14));
    CHECK(negativity_closed_form(cfg(Scenario::Inertial, 0, 1, 1, 1)) == Approx(0.1194).epsilon(1e-3));
}

TEST_CASE("critical distance and resonant frequency")
{
    CHECK(critical_distance(0.5, 1, pi / 2 / 0.5) == Approx(2 / 0.5).epsilon(1e-14));
    CHECK(critical_distance(0.001, 1, 1250) == Approx(1369.36).epsilon(1e-5));
    CHECK(std::abs(critical_distance(0.001, 1, 1250) - 1369.36) < 0.01);
    CHECK(critical_distance(0.01, 1, 1e-3) == Approx(0.01 * 1e-6).epsilon(1e-6));
    CHECK(resonant_omega(0.25, 1, 2 / 0.25) == Approx(pi / 2 / 0.25).epsilon(1e-14));
    for (double L : {0.3, 1.7, 5.5, 15.9}) {
        const double om = resonant_omega(0.25, 1.2, L);
        CHECK(std::abs(critical_distance(0.25, 1.2, om) - L) <= 1e-12 * L);
    }
    CHECK(resonant_omega(1, 1, 4 - 1e-9) == Approx(pi).epsilon(1e-4));
    CHECK_THROWS_AS(resonant_omega(1, 1, 4.5), PreconditionError);
}

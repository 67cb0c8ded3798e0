#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harvest/errors.hpp"
#include "harvest/integrate.hpp"

#include <cmath>
#include <numbers>

using namespace harvest;
using doctest::Approx;

TEST_CASE("polynomials are exact on one interval")
{
    const auto r = integrate([](double x) { return cplx(x * x * x - 2 * x, x * x); }, 0.0, 2.0);
    CHECK(r.value.real() == Approx(0.0).epsilon(1e-14));
    CHECK(r.value.imag() == Approx(8.0 / 3).epsilon(1e-14));
    CHECK(r.intervals == 1);
}

TEST_CASE("reversed limits flip the sign")
{
    auto f = [](double x) { return cplx(std::exp(x)); };
    CHECK(integrate(f, 1.0, 0.0).value.real() == Approx(-(std::exp(1.0) - 1)).epsilon(1e-14));
    CHECK(integrate(f, 0.5, 0.5).value == cplx(0.0));
}

TEST_CASE("oscillatory gaussian")
{
    // int e^{-x^2} e^{i k x} = sqrt(pi) e^{-k^2/4}
    const double k = 7.0;
    auto f = [&](double x) { return std::exp(-x * x) * std::exp(cplx(0.0, k * x)); };
    const auto r = integrate(f, -12.0, 12.0, {.rel_tol = 1e-12});
    CHECK(std::abs(r.value - std::sqrt(std::numbers::pi) * std::exp(-k * k / 4)) < 1e-14);
}

TEST_CASE("breakpoints at a kink")
{
    auto f = [](double x) { return cplx(std::abs(x - 0.3)); };
    const auto plain = integrate(f, 0.0, 1.0, {.rel_tol = 1e-12});
    const auto split = integrate(f, std::vector<double>{0.0, 0.3, 1.0}, {.rel_tol = 1e-12});
    const double exact = 0.5 * (0.09 + 0.49);
    CHECK(std::abs(plain.value.real() - exact) < 1e-12);
    CHECK(std::abs(split.value.real() - exact) < 1e-15);
    CHECK(split.intervals == 2);
    CHECK(plain.intervals > split.intervals);
}

TEST_CASE("budget exhaustion")
{
    auto f = [](double x) { return cplx(1.0 / std::sqrt(std::abs(x - 0.37))); };
    IntegrationOptions o;
    o.rel_tol = 1e-14;
    o.max_subdivisions = 20;
    CHECK_THROWS_AS(integrate(f, 0.0, 1.0, o), ConvergenceError);
    o.allow_unconverged = true;
    const auto r = integrate(f, 0.0, 1.0, o);
    CHECK_FALSE(r.converged);
    CHECK(r.error > 0);
}

TEST_CASE("parallel node evaluation gives identical bits")
{
    auto f = [](double x) { return std::exp(cplx(-x * x, 3 * x)) / (1.0 + 0.3 * std::cos(5 * x)); };
    IntegrationOptions o;
    o.rel_tol = 1e-13;
    const auto s = integrate(f, -6.0, 6.0, o);
    o.parallel = true;
    const auto p = integrate(f, -6.0, 6.0, o);
    CHECK(s.value == p.value);
    CHECK(s.error == p.error);
    CHECK(s.intervals == p.intervals);
}

TEST_CASE("integrand exceptions propagate in both paths")
{
    auto f = [](double x) -> cplx {
        if (x > 0.5)
            throw SingularEvaluation("pole");
        return 1.0;
    };
    CHECK_THROWS_AS(integrate(f, 0.0, 1.0), SingularEvaluation);
    IntegrationOptions o;
    o.parallel = true;
    CHECK_THROWS_AS(integrate(f, 0.0, 1.0, o), ConvergenceError);
}

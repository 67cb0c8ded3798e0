#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harvest/errors.hpp"
#include "harvest/residues.hpp"
#include "harvest/wightman.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace harvest;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

DetectorConfig anti(double kappa, double sigma, double omega, double a)
{
    DetectorConfig c;
    c.scenario = Scenario::AntiParallelAccel;
    c.kappa = kappa;
    c.sigma = sigma;
    c.omega = omega;
    c.L = a / kappa;
    return c;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("theta of y")
{
    const auto p = make_point(1.0, 1.0, 0.1); // b = 0.5
    for (Branch br : {Branch::Plus, Branch::Minus}) {
        const auto t = theta_of_y(0.0, br, p, 1.0);
        CHECK(std::abs(t.theta - I * pi / 3.0) < 1e-7);
        CHECK(std::abs(std::cosh(t.theta) - 0.5) < 1e-7);
    }
    const auto m = theta_of_y(80.0, Branch::Minus, p, 1.0);
    CHECK(std::abs(m.theta - I * pi / 2.0) < 1e-6);
    const auto q = theta_of_y(80.0, Branch::Plus, p, 1.0);
    CHECK(q.theta.real() < -30);
    CHECK(std::abs(q.theta.imag()) < 1e-12);
    // cosh theta = b e^{+-y kappa/2} up to the epsilon side
    const auto r = theta_of_y(0.7, Branch::Plus, p, 1.0);
    CHECK(std::abs(std::cosh(r.theta) - 0.5 * std::exp(0.35)) < 1e-9);
}

TEST_CASE("pole inclusion")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> Y(0.0, 50.0);
    const auto neg = make_point(2.6, 1.2, 0.1); // b < 0, w < pi/2
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(pole_included(Y(rng), Branch::Plus, neg, 1.0));
        CHECK_FALSE(pole_included(Y(rng), Branch::Minus, neg, 1.0));
    }
    CHECK(pole_included(0.0, Branch::Plus, make_point(1.0, pi / 2, 0.1), 1.0));
    CHECK(pole_included(0.0, Branch::Plus, make_point(2.2, 2.0, 0.1), 1.0));
}

TEST_CASE("kernel residue")
{
    const double kappa = 1.0;
    const auto p = make_point(1.0, 1.0, 1.0); // b = 0.5
    const auto tp = theta_of_y(0.0, Branch::Plus, p, kappa), tm = theta_of_y(0.0, Branch::Minus, p, kappa);
    CHECK_THROWS_AS(residue_of_kernel(tp.theta, tm.theta, kappa), DegeneratePole);

    const double y = 0.8;
    const cplx ts = theta_of_y(y, Branch::Plus, p, kappa).theta;
    const cplx to = theta_of_y(y, Branch::Minus, p, kappa).theta;
    const cplx r = residue_of_kernel(ts, to, kappa);
    CHECK(rel(r, -residue_of_kernel(to, ts, kappa) * (std::sinh(to) / std::sinh(ts))) < 1e-14);
    // (x - x_pole) D(x) as x -> x_pole, both sides averaged
    const cplx xp = 2.0 * ts / kappa;
    const double h = 1e-6;
    auto lim = [&](cplx d) { return d * d_antiparallel({xp + d, y, 0.0}, kappa, p); };
    const cplx num = 0.5 * (lim(h) + lim(-h));
    CHECK(rel(num, r) < 1e-6);
}

TEST_CASE("integrand at theta = i w")
{
    // cos w / b > 0 in both cases, so the log stays real
    for (const auto& p : {make_point(1.2, 1.0, 0.4), make_point(2.6, 2.2, 0.7)}) {
        const double w = p.w;
        const double mag = 1 / (2 * pi) / std::abs(std::cos(w) * std::cos(w) - p.b * p.b) *
                           std::exp(-std::pow(std::log(std::cos(w) / p.b), 2) / (p.g * p.g));
        CHECK(std::abs(integrand_I(I * w, p)) == Approx(mag).epsilon(1e-12));
        CHECK(std::abs(exponent_E(I * w, p).imag()) < 1e-12);
    }
}

TEST_CASE("saddle finder")
{
    // b = cos w: the log term and its slope vanish at i w, so i w is a saddle
    const double w = 1.3;
    auto p = make_point(2 * (1 - std::cos(w)), w, 0.5);
    const cplx s = find_saddle(p, {I * 0.9, I * 1.5});
    CHECK(std::abs(s - I * w) < 1e-8);
    CHECK(std::abs(exponent_slope(s, p)) < 1e-9);

    // b = 0.5, w = 2.6: no saddle on the imaginary axis, one off it
    p = make_point(1.0, 2.6, 0.001);
    const cplx ref(-0.471695012217, 1.194759744788);
    const Segment seg{ref - cplx(0.05, 0.05), ref + cplx(0.05, 0.05)};
    const cplx s1 = find_saddle(p, seg);
    CHECK(std::abs(s1 - ref) < 1e-9);
    CHECK(std::abs(exponent_slope(s1, p)) < 1e-9);
    CHECK(find_saddle(p, seg) == s1);
    CHECK_THROWS_AS(find_saddle(p, {I * 0.1, I * 1.5}), ConvergenceError);
}

TEST_CASE("residue vanishes for b < 0 below w = pi/2")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> A(2.0001, 4.4), W(0.01, pi / 2 - 1e-6), G(1e-3, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double a = A(rng), w = W(rng), g = G(rng);
        const auto c = config_from_point(Scenario::AntiParallelAccel, a, w, g);
        const auto r = residue_contribution(c);
        CHECK(r.value.is_zero());
    }
}

TEST_CASE("frozen residue values")
{
    struct Row {
        double kappa, sigma, omega, a;
        cplx value;
    };
    const Row rows[] = {
        {1, 1, 1.2, 1.0, {-0.249372484, 0.1736465601}},
        {1, 1, 2, 1.5, {-0.4963013522, 0.1990062194}},
        {0.7, 1, 1.8, 1.2, {-0.288917114, 0.09308393635}},
        {1, 1, 2, 2.5, {-0.1644758808, 0.0}},
        {0.8, 1, 2, 2.3, {-0.0004940335365, 0.0}},
    };
    for (const auto& r : rows) {
        CAPTURE(r.omega);
        CAPTURE(r.a);
        const cplx v = residue_contribution(anti(r.kappa, r.sigma, r.omega, r.a)).value.value();
        CHECK(std::abs(v - r.value) < 1e-8 * std::abs(r.value));
    }
}

TEST_CASE("small g")
{
    // w = 1.25 across the resonance; exponent carried separately at w = 2.6
    const double g = 0.001;
    CHECK(residue_contribution(config_from_point(Scenario::AntiParallelAccel, 1.369, 1.25, g)).value.value().real() ==
          Approx(-0.1818408812).epsilon(1e-7));
    CHECK(residue_contribution(config_from_point(Scenario::AntiParallelAccel, 1.3693, 1.25, g)).value.value().real() ==
          Approx(-0.5929457454).epsilon(1e-7));
    ResidueDiagnostics d;
    const auto r = residue_contribution(config_from_point(Scenario::AntiParallelAccel, 1.369, 2.6, g), {}, &d);
    CHECK(r.value.log_abs() == Approx(2114892.3771953).epsilon(1e-12));
    CHECK(d.sd_available);
    CHECK(d.sd_relative_difference < 1e-4);
}

TEST_CASE("assembled X against the direct oracle")
{
    // b = 0.5, w = 2 and b < 0, w > pi/2; sigma Omega = 2
    for (double a : {1.0, 2.5}) {
        const auto c = anti(1, 1, 2, a);
        const cplx total = x_shifted_residue_free(c).v() + residue_contribution(c).value.value();
        const cplx o = x_direct_oracle(c).v();
        CHECK(std::abs(total) == Approx(std::abs(o)).epsilon(0.05));
        CHECK(rel(total, o) < 1e-7);
    }
}

TEST_CASE("contour bookkeeping in diagnostics")
{
    ResidueDiagnostics d;
    residue_contribution(anti(1, 1, 2, 2.5), {}, &d);
    CHECK(d.contour.rcase == ResidueCase::BNegative);
    CHECK(d.path == "vertical segment quadrature");
    residue_contribution(anti(1, 1, 1.2, 1.0), {}, &d);
    CHECK(d.contour.rcase == ResidueCase::BPositive);
    CHECK_FALSE(d.contour.segments.empty());
}

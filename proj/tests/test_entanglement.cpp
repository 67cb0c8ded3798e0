#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harvest/entanglement.hpp"
#include "harvest/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace harvest;
using doctest::Approx;

namespace {

TwoDetectorState raw(double A, cplx X, cplx B = 0.0, double C = 0.0)
{
    TwoDetectorState s;
    s.A = A;
    s.X = WideComplex(X);
    s.B = B;
    s.C = C;
    s.scale = Scale::Raw;
    return s;
}

// random state of the right shape with a PSD corner block
TwoDetectorState random_state(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double A = 0.1 * u(rng), C = 0.05 * u(rng);
    const double bmax = std::sqrt(C * (1 - 2 * A - C));
    const cplx B = std::polar(bmax * u(rng), 2 * std::numbers::pi * u(rng));
    const cplx X = std::polar(0.2 * u(rng), 2 * std::numbers::pi * u(rng));
    return raw(A, X, B, C);
}

double corr_from_probs(const std::array<double, 4>& p) { return p[0] - p[1] - p[2] + p[3]; }

} // namespace

TEST_CASE("assembly residue parts")
{
    const auto par = assemble(config_from_point(Scenario::ParallelAccel, 1.0, 1.2, 0.01), Method::Quadrature);
    CHECK(par.x_residue.is_zero());
    const auto quiet = assemble(config_from_point(Scenario::AntiParallelAccel, 2.5, 1.2, 0.01), Method::Saddle);
    CHECK(quiet.x_residue.is_zero());
    const auto loud = assemble(config_from_point(Scenario::AntiParallelAccel, 1.0, 2.6, 0.001), Method::Saddle);
    CHECK_FALSE(loud.x_residue.is_zero());
    CHECK(loud.state.scale == Scale::Scaled);
}

TEST_CASE("saddle and quadrature assemblies agree")
{
    const auto c = config_from_point(Scenario::DeSitterComoving, 1.1, 0.9, 0.001);
    const auto s = assemble(c, Method::Saddle), q = assemble(c, Method::Quadrature);
    CHECK(q.state.A == Approx(s.state.A).epsilon(1e-4));
    CHECK(q.state.X.abs() == Approx(s.state.X.abs()).epsilon(1e-4));
    CHECK(negativity(q.state).positive() == negativity(s.state).positive());
}

TEST_CASE("negativity")
{
    CHECK_FALSE(negativity(raw(0.1, 0.1)).positive());
    CHECK(negativity(raw(0.1, 0.2)).value() == Approx(0.1).epsilon(1e-14));
    CHECK(negativity(raw(0.1, cplx(0.0, -0.25))).value() == Approx(0.15).epsilon(1e-14));
    // exponent beyond double
    TwoDetectorState s = raw(1e-7, 0.0);
    s.X = WideComplex(cplx(-1.0, 0.0), 1e6);
    CHECK(negativity(s).log_value == Approx(1e6).epsilon(1e-15));
}

TEST_CASE("partial transpose oracle")
{
    CHECK(pt_oracle(raw(0.1, 0.2, 0.0, 0.02)) == Approx(0.1).epsilon(1e-14));
    CHECK(pt_oracle(raw(0.05, 0.0, cplx(0.01, 0.02), 0.03)) == Approx(0.0).epsilon(1e-15));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const auto st = random_state(rng);
        REQUIRE(corner_psd(st));
        const double n = negativity(st).positive() ? negativity(st).value() : 0.0;
        CHECK(std::abs(pt_oracle(st) - n) < 1e-12);
        CHECK((pt_oracle(st) > 1e-12) == (n > 1e-12));
    }
}

TEST_CASE("raw-scale checks")
{
    TwoDetectorState s = raw(0.1, 0.2);
    s.scale = Scale::Scaled;
    CHECK_THROWS_AS(pt_oracle(s), PreconditionError);
    CHECK_THROWS_AS(pt_oracle(raw(0.6, 0.1)), PreconditionError);
    CHECK_THROWS_AS(pt_oracle(raw(-0.1, 0.1)), PreconditionError);
}

TEST_CASE("correlators")
{
    auto [xx, yy] = correlators(raw(0.1, 0.03));
    CHECK(xx == Approx(-0.06));
    CHECK(yy == Approx(0.06));
    std::tie(xx, yy) = correlators(raw(0.1, cplx(0.0, 0.03), cplx(0.02, 0.01), 0.01));
    CHECK(xx == Approx(0.04));
    CHECK(yy == Approx(0.04));

    // against the Born probabilities of the explicit eigenbases
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2000; ++i) {
        const auto st = random_state(rng);
        // positivity of the whole matrix is needed for probabilities
        TwoDetectorState ok = st;
        const double lim = std::sqrt(st.C * (1 - 2 * st.A - st.C));
        if (ok.X.abs() > lim)
            ok.X = WideComplex(ok.X.value() * (lim / ok.X.abs()));
        if (std::abs(ok.B) > ok.A)
            ok.B *= ok.A / std::abs(ok.B);
        const auto [cx, cy] = correlators(ok);
        CHECK(std::abs(cx - corr_from_probs(outcome_probabilities(ok, Basis::XX))) < 1e-14);
        CHECK(std::abs(cy - corr_from_probs(outcome_probabilities(ok, Basis::YY))) < 1e-14);
        CHECK(std::abs(cy - cx - 4 * ok.X.value().real()) < 1e-14);
    }
}

TEST_CASE("scaled to raw")
{
    TwoDetectorState s;
    s.A = 2.0;
    s.X = WideComplex(cplx(-3.0, 1.0));
    const auto r = to_raw(s, 0.01, 2.0);
    CHECK(r.scale == Scale::Raw);
    CHECK(r.A == Approx(2.0 * 1e-4 * std::exp(-4.0)).epsilon(1e-14));
    CHECK(std::abs(r.X.value() - cplx(-3.0, 1.0) * 1e-4 * std::exp(-4.0)) < 1e-18);
    CHECK_THROWS_AS(to_raw(s, 0.01, 31.0), PreconditionError);
    CHECK(to_raw(s, 0.01, 31.0, true).A == 0.0);
    CHECK_THROWS_AS(to_raw(s, 0.0, 1.0), PreconditionError);
}

TEST_CASE("rescaling for sampling keeps the direction")
{
    TwoDetectorState s;
    s.A = 1e-7;
    s.X = WideComplex(cplx(0.6, -0.8), 40.0);
    const auto r = rescaled_for_sampling(s, 0.05);
    CHECK(r.X.abs() == Approx(0.05).epsilon(1e-12));
    CHECK(r.A / r.X.abs() == Approx(1e-7 / std::exp(40.0)).epsilon(1e-10));
    CHECK(std::arg(r.X.value()) == Approx(std::arg(cplx(0.6, -0.8))).epsilon(1e-14));
}

TEST_CASE("sampling")
{
    const auto st = raw(0.05, 0.04, 0.0, 0.04);
    const auto a = sample_measurements(st, Basis::XX, 100000, 99);
    const auto b = sample_measurements(st, Basis::XX, 100000, 99);
    CHECK(a.counts == b.counts);
    CHECK(a.counts[0] + a.counts[1] + a.counts[2] + a.counts[3] == 100000);

    const std::uint64_t n = 2000000;
    const auto xx = sample_measurements(st, Basis::XX, n, 5), yy = sample_measurements(st, Basis::YY, n, 6);
    const double est = yy.correlator() - xx.correlator();
    const double se = std::hypot(xx.std_error(), yy.std_error());
    CHECK(std::abs(est - 4 * 0.04) < 5 * se);

    const auto zero = raw(0.05, 0.0);
    const auto zx = sample_measurements(zero, Basis::XX, n, 7), zy = sample_measurements(zero, Basis::YY, n, 8);
    CHECK(std::abs(zx.correlator()) < 5 * zx.std_error());
    CHECK(std::abs(zy.correlator()) < 5 * zy.std_error());
}

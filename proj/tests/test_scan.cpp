#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harvest/errors.hpp"
#include "harvest/saddle.hpp"
#include "harvest/scan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace harvest;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

bool same_cells(const ScanGrid& a, const ScanGrid& b)
{
    if (a.cells.size() != b.cells.size())
        return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const Cell &p = a.cells[i], &q = b.cells[i];
        const bool same_n = p.N.log_value == q.N.log_value || (std::isnan(p.N.log_value) && std::isnan(q.N.log_value));
        if (!same_n || p.A != q.A || p.log_abs_X != q.log_abs_X || p.flags != q.flags || p.path != q.path)
            return false;
    }
    return true;
}
} // namespace

TEST_CASE("axes")
{
    const auto a = open_closed_axis(0.0, 4.5, 200);
    REQUIRE(a.size() == 200);
    CHECK(a.front() == Approx(4.5 / 200));
    CHECK(a.back() == 4.5);
    CHECK(std::is_sorted(a.begin(), a.end()));

    const auto s = symlog_axis(10.0, 1e-4, 5);
    REQUIRE(s.size() == 10);
    CHECK(s.front() == Approx(-10.0));
    CHECK(s.back() == Approx(10.0));
    CHECK(s[4] == Approx(-1e-3));
    CHECK(s[5] == Approx(1e-3));
    CHECK(std::is_sorted(s.begin(), s.end()));
}

TEST_CASE("parallel grid follows the closed criterion")
{
    GridSpec g;
    g.scenario = Scenario::ParallelAccel;
    g.a_n = 60;
    g.w_n = 50;
    const auto grid = grid_scan(g);
    for (const Cell& c : grid.cells) {
        CAPTURE(c.a);
        CAPTURE(c.w);
        CHECK(c.entangled == (c.a / 2 < std::sin(c.w)));
        CHECK(c.path == "saddle");
    }
}

TEST_CASE("serial and parallel scans give the same bits")
{
    GridSpec g;
    g.scenario = Scenario::AntiParallelAccel;
    g.a_n = 9;
    g.w_n = 7;
    g.g = 0.01;
    g.method = Method::Quadrature;
    g.threads = 4;
    const auto p = grid_scan(g), s = grid_scan_serial(g);
    CHECK(same_cells(p, s));
    g.method = Method::Saddle;
    CHECK(same_cells(grid_scan(g), grid_scan_serial(g)));
}

TEST_CASE("resonance cells are flagged and use quadrature")
{
    GridSpec g;
    g.scenario = Scenario::AntiParallelAccel;
    g.a_n = 20;
    g.w_n = 10;
    const double w = 1.0;
    const double tol = 0.5 * 4.5 / 20;
    const Cell c = evaluate_cell(g, 2 * (1 - std::cos(w)) + 0.3 * tol, w, tol);
    CHECK((c.flags & CellResonance) != 0);
    CHECK((c.flags & CellForcedQuad) != 0);
    CHECK(c.path == "quadrature+residue");
    CHECK(flags_string(c.flags) == "resonance|forced_quadrature");
    const Cell far = evaluate_cell(g, 3.5, w, tol);
    CHECK(far.flags == 0);
    CHECK(far.path == "saddle+residue");
    CHECK(flags_string(far.flags) == "-");
}

TEST_CASE("boundary trace")
{
    CHECK(boundary_trace(Scenario::ParallelAccel, pi / 2) == Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(boundary_trace(Scenario::ThermalInertial, pi / 2) - 2.39936) < 1e-5);
    const double u = boundary_trace(Scenario::ThermalInertial, pi / 2) / 2;
    CHECK(std::abs(u * std::tanh(u) - 1.0) < 1e-10);
    CHECK(boundary_trace(Scenario::ParallelAccel, 1e-3) == Approx(2e-3).epsilon(1e-6));
    for (int i = 1; i <= 20; ++i) {
        const double w = 0.1 + (pi - 0.2) * i / 21;
        CHECK(std::abs(boundary_trace(Scenario::ParallelAccel, w) - 2 * std::sin(w)) < 1e-10);
    }
    CHECK_THROWS_AS(boundary_trace(Scenario::AntiParallelAccel, 1.0), UnsupportedClosedForm);
}

TEST_CASE("resonance locus")
{
    const auto r = resonance_locus({pi / 2, pi}, 0.001, 1.0);
    CHECK(r[0].a_crit == Approx(2.0));
    CHECK(r[0].L_crit == Approx(2000.0));
    CHECK(r[1].a_crit == Approx(4.0));
    std::vector<double> ws;
    for (int i = 1; i <= 300; ++i)
        ws.push_back(pi * i / 300);
    for (const auto& p : resonance_locus(ws, 0.01, 1.0)) {
        CHECK(p.a_crit <= 2 * p.w);
        CHECK(p.omega == Approx(p.w / 0.01));
    }
}

TEST_CASE("corridor")
{
    const double lc = critical_distance(0.001, 1, 1250);
    const auto sw = corridor_sweep(0.001, 1, 1250, {-0.5 * lc, -1e-5 * lc, 1e-5 * lc, 0.5 * lc});
    CHECK(sw.L_crit == Approx(1369.355275).epsilon(1e-9));
    REQUIRE(sw.points.size() == 4);
    for (const auto& p : sw.points)
        CHECK(p.ok);
    CHECK(sw.points[0].reX < 0);
    CHECK(sw.points[3].reX < 0);
    CHECK(sw.points[1].reX > 0);
    CHECK(sw.points[2].reX > 0);
    CHECK(std::abs(sw.points[1].reX) > 10 * std::abs(sw.points[0].reX));
    REQUIRE(sw.sign_change_interval);
    CHECK(sw.sign_change_interval->first == sw.points[0].dL);
    CHECK(sw.sign_change_interval->second == sw.points[3].dL);
    // window
    CHECK_THROWS_AS(corridor_sweep(0.001, 1, 1000, {0.0}), PreconditionError);
}

TEST_CASE("sign change interval")
{
    std::vector<CorridorPoint> pts(5);
    const double re[] = {-1, -2, 3, 4, -1};
    for (int i = 0; i < 5; ++i) {
        pts[i].dL = i - 2.0;
        pts[i].reX = re[i];
    }
    auto iv = sign_change_interval(pts);
    REQUIRE(iv);
    CHECK(iv->first == -1.0);
    CHECK(iv->second == 2.0);
    for (auto& p : pts)
        p.reX = -1;
    CHECK_FALSE(sign_change_interval(pts));
}

TEST_CASE("corridor rangefinding")
{
    const double lc = critical_distance(0.001, 1, 1250);
    DetectorConfig c;
    c.scenario = Scenario::AntiParallelAccel;
    c.kappa = 0.001;
    c.sigma = 1;
    c.omega = 1250;
    c.L = lc * (1 + 1e-5);
    DetectorConfig far = c;
    far.L = lc * 0.7;
    const auto v = rangefind_corridor({c, far}, 100000, 17);
    CHECK(v[0].at_critical);
    CHECK_FALSE(v[1].at_critical);
    CHECK(v[0].truth > 0);
    CHECK(v[1].truth < 0);
    CHECK(v[0].seed_xx != v[1].seed_xx);
    // same seed, same answer
    CHECK(rangefind_corridor({c, far}, 100000, 17)[0].estimate == v[0].estimate);

    // wrong verdicts get rarer with more shots
    const std::vector<DetectorConfig> many(60, c);
    int prev = 61;
    for (std::uint64_t shots : {10, 100, 1000}) {
        int wrong = 0;
        for (const auto& r : rangefind_corridor(many, shots, 1234))
            wrong += !r.at_critical;
        CAPTURE(shots);
        CHECK(wrong <= prev);
        prev = wrong;
    }
    CHECK(prev == 0);
}

TEST_CASE("sudden death protocol")
{
    CHECK_THROWS_AS(rangefind_sudden_death(0.001, 1, 1000, 50), PreconditionError);
    CHECK_THROWS_AS(rangefind_sudden_death(0.001, 1, 2600, 3000), PreconditionError);
    const auto r = rangefind_sudden_death(0.001, 1, 2600, 50, Method::Saddle);
    CHECK(r.trigger == (r.above && !r.below));
    CHECK(r.above == r.N_above.positive());
    // same numbers as a grid cell at the same point
    GridSpec g;
    g.scenario = Scenario::AntiParallelAccel;
    const Cell up = evaluate_cell(g, 2.05, 2.6, 1e-6);
    CHECK(up.N.log_value == Approx(r.N_above.log_value).epsilon(1e-12));
}

TEST_CASE("gradient protocol")
{
    const auto ref = config_from_point(Scenario::ParallelAccel, 1.0, 1.2, 0.001);
    const WideReal n0 = negativity(assemble(ref, Method::Quadrature).state);
    auto e = rangefind_gradient(ref, n0);
    CHECK(e.dL == 0.0);
    CHECK_FALSE(e.ill_conditioned);

    for (double frac : {1e-3, 3e-4, -5e-4}) {
        DetectorConfig moved = ref;
        moved.L = ref.L * (1 + frac);
        e = rangefind_gradient(ref, negativity(assemble(moved, Method::Quadrature).state));
        CHECK(e.dL == Approx(frac * ref.L).epsilon(0.1));
    }

    // not entangled at all: nothing to invert
    const auto flat = config_from_point(Scenario::ParallelAccel, 3.0, 1.2, 0.001);
    e = rangefind_gradient(flat, WideReal{});
    CHECK(e.ill_conditioned);
}

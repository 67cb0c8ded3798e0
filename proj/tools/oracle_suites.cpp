#include "oracle_suites.hpp"
#include "harvest/errors.hpp"
#include "harvest/residues.hpp"
#include "harvest/saddle.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace harvest::cli {

namespace {

std::string label(const char* fmt, double a, double b, double c)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    return buf;
}

OracleCase gate(const std::string& suite, const std::string& name, double tol, const std::function<std::pair<double, double>()>& f)
{
    OracleCase c;
    c.suite = suite;
    c.name = name;
    c.tol = tol;
    try {
        auto [v, r] = f();
        c.value = v;
        c.reference = r;
        c.rel_err = r != 0.0 ? std::abs(v - r) / std::abs(r) : std::abs(v);
        c.pass = c.rel_err <= tol;
    } catch (const std::exception& e) {
        c.value = c.reference = c.rel_err = std::nan("");
        c.note = e.what();
        c.pass = false;
    }
    return c;
}

void assembly(std::vector<OracleCase>& out, const QuadratureSettings& q)
{
    // (g, w, a): first four have b < 0, w > pi/2; the rest b > 0 with a pole
    // crossed; sigma Omega = w / g <= 2 throughout
    const double pts[][3] = {{1.0, 1.7, 2.3}, {1.0, 1.9, 3.0}, {1.3, 2.2, 2.6}, {1.3, 2.5, 3.4}, {1.0, 1.2, 1.0},
                             {1.0, 1.5, 1.5}, {1.3, 2.2, 1.5}, {1.0, 0.9, 0.5}, {0.6, 1.1, 1.2}, {1.0, 2.0, 1.9}};
    for (const auto& p : pts) {
        const DetectorConfig c = config_from_point(Scenario::AntiParallelAccel, p[2], p[1], p[0]);
        out.push_back(gate("assembly", label("antiparallel g=%g w=%g a=%g |X|", p[0], p[1], p[2]), 0.05, [&] {
            const cplx x = x_shifted_residue_free(c, q).v() + residue_contribution(c, q).value.value();
            return std::pair{std::abs(x), std::abs(x_direct_oracle(c, q).v())};
        }));
    }
}

void saddle(std::vector<OracleCase>& out, const QuadratureSettings& q)
{
    const double g = 0.001;
    for (Scenario s : {Scenario::ParallelAccel, Scenario::DeSitterComoving, Scenario::ThermalInertial})
        for (double w : {0.5, 1.2, 2.5})
            for (double a : {0.7, 1.9}) {
                const DetectorConfig c = config_from_point(s, a, w, g);
                const std::string tag = std::string(to_string(s)) + label(" w=%g a=%g", w, a, 0);
                out.push_back(gate("saddle", tag + " A", 1e-4, [&] {
                    return std::pair{a_shifted(c, q).v().real(), a_saddle(c).v().real()};
                }));
                out.push_back(gate("saddle", tag + " |X|", 1e-4, [&] {
                    return std::pair{std::abs(x_shifted_residue_free(c, q).v()), std::abs(x_saddle(c).v())};
                }));
            }
}

void amplitude(std::vector<OracleCase>& out, const QuadratureSettings& q)
{
    for (Scenario s : {Scenario::ParallelAccel, Scenario::DeSitterComoving, Scenario::ThermalInertial,
                       Scenario::AntiParallelAccel, Scenario::Inertial}) {
        DetectorConfig c;
        c.scenario = s;
        c.kappa = s == Scenario::Inertial ? 0.0 : 0.5;
        c.sigma = 1.0;
        c.omega = 1.5;
        c.L = 3.0;
        const std::string tag(to_string(s));
        out.push_back(gate("amplitude", tag + " A shifted vs direct", 1e-7, [&] {
            return std::pair{a_shifted(c, q).v().real(), a_direct_oracle(c, q).v().real()};
        }));
        if (s == Scenario::AntiParallelAccel)
            continue; // needs the residue terms, see the assembly suite
        out.push_back(gate("amplitude", tag + " X shifted vs direct (single ordering)", 1e-7, [&] {
            const cplx x = x_shifted_residue_free(c, q).v();
            const cplx r = x_direct_oracle(c, q, nullptr, OracleOrdering::Single).v();
            // complex distance, reported as |r| + |x - r| against |r|
            return std::pair{std::abs(x - r) + std::abs(r), std::abs(r)};
        }));
    }
    for (double so : {0.5, 1.0, 3.0}) {
        DetectorConfig c;
        c.scenario = Scenario::Inertial;
        c.sigma = 1.0;
        c.omega = so;
        c.L = 5.0;
        out.push_back(gate("amplitude", label("inertial A exact sigma*Omega=%g", so, 0, 0), 1e-8, [&] {
            return std::pair{a_shifted(c, q).v().real(), a_inertial_exact(so)};
        }));
    }
}

void contour(std::vector<OracleCase>& out, const QuadratureSettings& q)
{
    const double half = std::numbers::pi / 2;
    for (double g : {0.001, 0.1, 1.0})
        for (double w : {0.3, 1.0, half - 0.01})
            for (double a : {2.2, 3.5}) {
                const DetectorConfig c = config_from_point(Scenario::AntiParallelAccel, a, w, g);
                out.push_back(gate("contour", label("vanishing g=%g w=%g a=%g", g, w, a), 0.0, [&] {
                    return std::pair{residue_contribution(c, q).value.abs(), 0.0};
                }));
            }
    // small g: the quadrature and the Gaussian estimate around the
    // dominant saddle or pole agree to O(g)
    const double sd[][2] = {{1.0, 1.2}, {1.369, 2.6}, {2.5, 2.0}, {3.0, 2.2}};
    for (const auto& p : sd) {
        const DetectorConfig c = config_from_point(Scenario::AntiParallelAccel, p[0], p[1], 0.01);
        out.push_back(gate("contour", label("steepest descent g=0.01 w=%g a=%g", p[1], p[0], 0), 0.05, [&] {
            ResidueDiagnostics d;
            residue_contribution(c, q, &d);
            if (!d.sd_available)
                throw ConvergenceError("no steepest-descent estimate on path '" + d.path + "'");
            return std::pair{d.sd_relative_difference, 0.0};
        }));
    }
}

} // namespace

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"assembly", "saddle", "amplitude", "contour"};
    return names;
}

std::vector<OracleCase> run_suite(const std::string& suite, const QuadratureSettings& q)
{
    std::vector<OracleCase> out;
    if (suite == "all") {
        for (const auto& s : suite_names()) {
            auto part = run_suite(s, q);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    if (suite == "assembly")
        assembly(out, q);
    else if (suite == "saddle")
        saddle(out, q);
    else if (suite == "amplitude")
        amplitude(out, q);
    else if (suite == "contour")
        contour(out, q);
    else
        throw PreconditionError("unknown suite '" + suite + "' (assembly|saddle|amplitude|contour|all)");
    return out;
}

} // namespace harvest::cli

#include "harvest/core.hpp"
#include "harvest/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace harvest {

std::string_view to_string(Scenario s)
{
    switch (s) {
    case Scenario::ParallelAccel: return "parallel";
    case Scenario::AntiParallelAccel: return "antiparallel";
    case Scenario::DeSitterComoving: return "desitter";
    case Scenario::ThermalInertial: return "thermal";
    case Scenario::Inertial: return "inertial";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view name)
{
    if (name == "parallel" || name == "ParallelAccel")
        return Scenario::ParallelAccel;
    if (name == "antiparallel" || name == "anti-parallel" || name == "AntiParallelAccel")
        return Scenario::AntiParallelAccel;
    if (name == "desitter" || name == "de-sitter" || name == "DeSitterComoving")
        return Scenario::DeSitterComoving;
    if (name == "thermal" || name == "ThermalInertial")
        return Scenario::ThermalInertial;
    if (name == "inertial" || name == "Inertial")
        return Scenario::Inertial;
    throw PreconditionError("unknown scenario '" + std::string(name) + "'");
}

void validate(const DetectorConfig& cfg)
{
    auto bad = [](const std::string& m) { throw PreconditionError(m); };
    if (!std::isfinite(cfg.kappa) || !std::isfinite(cfg.sigma) || !std::isfinite(cfg.omega) ||
        !std::isfinite(cfg.L) || !std::isfinite(cfg.eta0))
        bad("parameters must be finite");
    if (cfg.sigma <= 0)
        bad("sigma must be > 0");
    if (cfg.omega <= 0)
        bad("omega must be > 0");
    if (cfg.L <= 0)
        bad("L must be > 0");
    if (cfg.eta0 <= 0 || cfg.eta0 >= 1)
        bad("eta0 must be in (0, 1)");
    if (cfg.scenario == Scenario::Inertial) {
        if (cfg.kappa != 0)
            bad("inertial scenario requires kappa = 0");
    } else if (cfg.kappa <= 0) {
        bad("kappa must be > 0 for accelerated, de Sitter and thermal scenarios");
    }
}

void validate_for_amplitudes(const DetectorConfig& cfg)
{
    validate(cfg);
    if (cfg.scenario != Scenario::Inertial && !(cfg.w() < std::numbers::pi)) {
        std::ostringstream os;
        os << "kappa*sigma^2*Omega must be < pi (got " << cfg.w() << ")";
        throw PreconditionError(os.str());
    }
}

SpacetimeEvent trajectory(const DetectorConfig& cfg, Detector d, double tau)
{
    if (cfg.scenario == Scenario::Inertial) {
        double x = (d == Detector::A) ? cfg.L / 2 : -cfg.L / 2;
        return {tau, x};
    }
    if (cfg.kappa == 0)
        throw PreconditionError("kappa = 0: use inertial closed forms");
    if (cfg.scenario != Scenario::ParallelAccel && cfg.scenario != Scenario::AntiParallelAccel)
        throw PreconditionError("no Minkowski trajectory for scenario " + std::string(to_string(cfg.scenario)));

    const double k = cfg.kappa;
    const double t = std::sinh(k * tau) / k;
    // cosh - 1 written without cancellation
    const double s = std::sinh(k * tau / 2);
    const double rise = 2 * s * s / k;
    if (d == Detector::A)
        return {t, rise + cfg.L / 2};
    const double sgn = (cfg.scenario == Scenario::ParallelAccel) ? 1.0 : -1.0;
    return {t, sgn * rise - cfg.L / 2};
}

double window(const DetectorConfig& cfg, double tau)
{
    return cfg.eta0 * std::exp(-tau * tau / (2 * cfg.sigma * cfg.sigma));
}

double unruh_temperature(double kappa)
{
    return kappa / (2 * std::numbers::pi);
}

DimensionlessPoint make_point(double a, double w, double g)
{
    return {a, w, g, 1.0 - a / 2.0};
}

DimensionlessPoint reduce(const DetectorConfig& cfg)
{
    if (cfg.kappa <= 0)
        throw PreconditionError("kappa = 0 has no dimensionless reduction: use the inertial path");
    return make_point(cfg.L * cfg.kappa, cfg.w(), cfg.kappa * cfg.sigma);
}

DetectorConfig config_from_point(Scenario s, double a, double w, double g, double sigma, double eta0)
{
    DetectorConfig c;
    c.scenario = s;
    c.sigma = sigma;
    c.eta0 = eta0;
    c.kappa = g / sigma;
    c.omega = w / (c.kappa * sigma * sigma);
    c.L = a / c.kappa;
    // inertial cells keep the same Omega and L but drop the acceleration
    if (s == Scenario::Inertial)
        c.kappa = 0.0;
    return c;
}

} // namespace harvest

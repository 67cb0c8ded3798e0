#include "harvest/saddle.hpp"
#include "harvest/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace harvest {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

void check_w(double w)
{
    if (!(w > 0 && w < pi)) {
        std::ostringstream os;
        os << "saddle forms need 0 < kappa*sigma^2*Omega < pi (got " << w << ")";
        throw PreconditionError(os.str());
    }
}

ScaledAmplitude make(cplx v, AmplitudeKind k)
{
    ScaledAmplitude out;
    out.kind = k;
    out.value = WideComplex(v);
    out.method = "saddle point";
    if (k == AmplitudeKind::XScaled)
        out.parts = AmplitudeParts{WideComplex(v), WideComplex(0.0)};
    return out;
}

void closed_form_only(Scenario s)
{
    if (s == Scenario::AntiParallelAccel)
        throw UnsupportedClosedForm("anti-parallel detectors have no closed criterion; use entanglement::assemble");
}

} // namespace

ScaledAmplitude a_saddle(const DetectorConfig& cfg)
{
    validate(cfg);
    if (cfg.scenario == Scenario::Inertial) {
        const double so = cfg.sigma_omega();
        return make(1.0 / (8 * pi * so * so), AmplitudeKind::AScaled);
    }
    const DimensionlessPoint p = reduce(cfg);
    check_w(p.w);
    const double c = p.g / 2 / std::sin(p.w);
    return make(c * c / (2 * pi), AmplitudeKind::AScaled);
}

ScaledAmplitude x_saddle(const DetectorConfig& cfg)
{
    validate(cfg);
    const double sr = cfg.sigma / cfg.L;
    if (cfg.scenario == Scenario::Inertial)
        return make(-sr * sr / (2 * pi), AmplitudeKind::XScaled);
    const DimensionlessPoint p = reduce(cfg);
    check_w(p.w);
    switch (cfg.scenario) {
    case Scenario::ParallelAccel:
        return make(-sr * sr / (2 * pi), AmplitudeKind::XScaled);
    case Scenario::DeSitterComoving:
        return make(-sr * sr / (2 * pi) * std::exp(-2.0 * I * p.w), AmplitudeKind::XScaled);
    case Scenario::AntiParallelAccel: {
        const double den = p.a + 2 * (std::cos(p.w) - 1);
        if (std::abs(den) < 1e-9)
            throw ResonanceDivergence("saddle form diverges at the critical distance");
        const double r = cfg.sigma * cfg.kappa / den;
        return make(-r * r / (2 * pi), AmplitudeKind::XScaled);
    }
    case Scenario::ThermalInertial: {
        const double v = cfg.kappa * cfg.sigma * cfg.sigma / (2 * cfg.L) / std::tanh(p.a / 2);
        return make(-v / (2 * pi), AmplitudeKind::XScaled);
    }
    default: break;
    }
    throw PreconditionError("x_saddle: unknown scenario");
}

CriterionResult criterion(Scenario s, double a, double w)
{
    closed_form_only(s);
    CriterionResult r;
    switch (s) {
    case Scenario::ParallelAccel:
    case Scenario::DeSitterComoving:
        r.lhs = a / 2;
        r.rhs = std::sin(w);
        break;
    case Scenario::ThermalInertial:
        r.lhs = a / 2 * std::tanh(a / 2);
        r.rhs = std::sin(w) * std::sin(w);
        break;
    case Scenario::Inertial:
        // L/2 < sigma^2 Omega, both sides multiplied by kappa
        r.lhs = a / 2;
        r.rhs = w;
        break;
    default: break;
    }
    r.margin = r.rhs - r.lhs;
    r.entangled = r.margin > 0;
    return r;
}

CriterionResult criterion(const DetectorConfig& cfg)
{
    validate(cfg);
    closed_form_only(cfg.scenario);
    if (cfg.scenario == Scenario::Inertial) {
        CriterionResult r;
        r.lhs = cfg.L / 2;
        r.rhs = cfg.sigma * cfg.sigma * cfg.omega;
        r.margin = r.rhs - r.lhs;
        r.entangled = r.margin > 0;
        return r;
    }
    const DimensionlessPoint p = reduce(cfg);
    return criterion(cfg.scenario, p.a, p.w);
}

double negativity_closed_form(Scenario s, double a, double w, double g)
{
    closed_form_only(s);
    const double g2 = g * g;
    double xmag = 0, amp = 0;
    switch (s) {
    case Scenario::ParallelAccel:
    case Scenario::DeSitterComoving:
        xmag = g2 / (a * a);
        amp = g2 / (4 * std::sin(w) * std::sin(w));
        break;
    case Scenario::ThermalInertial:
        xmag = g2 / (2 * a) / std::tanh(a / 2);
        amp = g2 / (4 * std::sin(w) * std::sin(w));
        break;
    case Scenario::Inertial:
        xmag = g2 / (a * a);
        amp = g2 / (4 * w * w);
        break;
    default: break;
    }
    return std::max(xmag - amp, 0.0) / (2 * pi);
}

double negativity_closed_form(const DetectorConfig& cfg)
{
    validate(cfg);
    closed_form_only(cfg.scenario);
    if (cfg.scenario == Scenario::Inertial) {
        const double sr = cfg.sigma / cfg.L, so = cfg.sigma_omega();
        return std::max(sr * sr - 1.0 / (4 * so * so), 0.0) / (2 * pi);
    }
    const DimensionlessPoint p = reduce(cfg);
    check_w(p.w);
    return negativity_closed_form(cfg.scenario, p.a, p.w, p.g);
}

double critical_distance(double kappa, double sigma, double omega)
{
    const double w = kappa * sigma * sigma * omega;
    check_w(w);
    // 1 - cos w = 2 sin^2(w/2)
    const double s = std::sin(w / 2);
    return 4.0 * s * s / kappa;
}

double resonant_omega(double kappa, double sigma, double L)
{
    const double a = L * kappa;
    if (!(a > 0 && a < 4))
        throw PreconditionError("resonant_omega needs 0 < L*kappa < 4");
    // arccos(1 - a/2) = 2 asin(sqrt(a)/2)
    return 2 * std::asin(std::sqrt(a) / 2) / (kappa * sigma * sigma);
}

} // namespace harvest

#include "harvest/wightman.hpp"
#include "harvest/errors.hpp"

#include <cmath>
#include <numbers>

namespace harvest {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double guard_ratio = 1e-12;
const cplx I(0.0, 1.0);

// den is considered zero when it is lost against the size of the terms it came from.
void guard(cplx den, double scale, const char* what)
{
    if (!(std::abs(den) > guard_ratio * scale))
        throw SingularEvaluation(std::string(what) + ": evaluation on a pole");
}

cplx coth_guarded(cplx u, const char* what)
{
    cplx s = std::sinh(u), c = std::cosh(u);
    guard(s, std::abs(c), what);
    return c / s;
}

} // namespace

cplx d_plus_minkowski(const SpacetimeEvent& e1, const SpacetimeEvent& e2, double epsilon)
{
    const cplx dt = cplx(e1.t - e2.t, -epsilon);
    const double dx = e1.x - e2.x;
    const cplx u = dt - dx, v = dt + dx;
    // with epsilon > 0 neither factor can vanish
    if (epsilon == 0) {
        guard(u, std::abs(dt) + std::abs(dx), "d_plus_minkowski");
        guard(v, std::abs(dt) + std::abs(dx), "d_plus_minkowski");
    }
    return -1.0 / (4 * pi * pi * u * v);
}

cplx d_parallel(const KernelArgs& args, double kappa, const DimensionlessPoint& p)
{
    const double k = kappa;
    const cplx e = std::exp(args.x * k / 2.0);
    const cplx sh = std::sinh(args.y * k / 2.0);
    const cplx t1 = sh / e, t2 = e * sh;
    const cplx b1 = p.a / 2 + I * args.epsilon - t1;
    const cplx b2 = p.a / 2 - I * args.epsilon + t2;
    guard(b1, p.a / 2 + std::abs(t1), "d_parallel");
    guard(b2, p.a / 2 + std::abs(t2), "d_parallel");
    return k * k / (16 * pi * pi) / (b1 * b2);
}

cplx d_antiparallel(const KernelArgs& args, double kappa, const DimensionlessPoint& p)
{
    const double k = kappa;
    const cplx ch = std::cosh(args.x * k / 2.0);
    const cplx em = std::exp(-args.y * k / 2.0), ep = std::exp(args.y * k / 2.0);
    const cplx b1 = -p.b * em - I * args.epsilon + ch;
    const cplx b2 = -p.b * ep + I * args.epsilon + ch;
    guard(b1, std::abs(p.b * em) + std::abs(ch), "d_antiparallel");
    guard(b2, std::abs(p.b * ep) + std::abs(ch), "d_antiparallel");
    return k * k / (16 * pi * pi) / (b1 * b2);
}

cplx d_desitter(const KernelArgs& args, double kappa, const DimensionlessPoint& p)
{
    const double k = kappa;
    const cplx t1 = std::exp(args.x * k) * (p.a * p.a / 4);
    const cplx sh = std::sinh(k * (args.y - I * args.epsilon) / 2.0);
    const cplx t2 = sh * sh;
    const cplx den = t1 - t2;
    guard(den, std::abs(t1) + std::abs(t2), "d_desitter");
    return k * k / (16 * pi * pi) / den;
}

cplx d_thermal(const KernelArgs& args, double kappa, const DimensionlessPoint& p)
{
    const double k = kappa;
    const double L = p.a / k;
    const cplx c1 = coth_guarded(k * (L - args.y + I * args.epsilon) / 2.0, "d_thermal");
    const cplx c2 = coth_guarded(k * (L + args.y - I * args.epsilon) / 2.0, "d_thermal");
    return k / (16 * pi * pi * L) * (c1 + c2);
}

cplx d_detect(cplx y, double kappa, double epsilon)
{
    const cplx u = kappa * (y - I * epsilon) / 2.0;
    const cplx s = std::sinh(u);
    guard(s, std::abs(std::cosh(u)), "d_detect");
    return -kappa * kappa / (16 * pi * pi) / (s * s);
}

cplx d_inertial(const KernelArgs& args, double L)
{
    const cplx dt = args.y - I * args.epsilon;
    const cplx den = dt * dt - L * L;
    guard(den, std::norm(dt) + L * L, "d_inertial");
    return -1.0 / (4 * pi * pi * den);
}

cplx d_detect_inertial(cplx y, double epsilon)
{
    const cplx dt = y - I * epsilon;
    const cplx den = dt * dt;
    if (!(std::abs(den) > 0.0))
        throw SingularEvaluation("d_detect_inertial: evaluation on a pole");
    return -1.0 / (4 * pi * pi * den);
}

cplx cross_kernel(const DetectorConfig& cfg, const KernelArgs& args)
{
    if (cfg.scenario == Scenario::Inertial)
        return d_inertial(args, cfg.L);
    const DimensionlessPoint p = reduce(cfg);
    switch (cfg.scenario) {
    case Scenario::ParallelAccel: return d_parallel(args, cfg.kappa, p);
    case Scenario::AntiParallelAccel: return d_antiparallel(args, cfg.kappa, p);
    case Scenario::DeSitterComoving: return d_desitter(args, cfg.kappa, p);
    case Scenario::ThermalInertial: return d_thermal(args, cfg.kappa, p);
    default: break;
    }
    throw PreconditionError("cross_kernel: unknown scenario");
}

} // namespace harvest

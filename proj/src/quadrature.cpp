#include "harvest/quadrature.hpp"
#include "harvest/errors.hpp"
#include "harvest/wightman.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

namespace harvest {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

double radius(const DetectorConfig& cfg, const QuadratureSettings& s)
{
    return s.truncation_radius * std::sqrt(2.0) * cfg.sigma;
}

IntegrationOptions outer_options(const QuadratureSettings& s)
{
    IntegrationOptions o;
    o.abs_tol = s.abs_tol;
    o.rel_tol = s.rel_tol;
    o.max_subdivisions = s.max_subdivisions;
    o.parallel = s.parallel;
    return o;
}

IntegrationOptions inner_options(const QuadratureSettings& s)
{
    IntegrationOptions o = outer_options(s);
    o.rel_tol = s.rel_tol * 0.1;
    o.parallel = false;
    return o;
}

// Kernel on the shifted line, epsilon = 0, without re-reducing cfg per call.
struct ShiftedKernel {
    DetectorConfig cfg;
    DimensionlessPoint p{};

    explicit ShiftedKernel(const DetectorConfig& c) : cfg(c)
    {
        if (c.scenario != Scenario::Inertial)
            p = reduce(c);
    }

    cplx operator()(cplx x, cplx y) const
    {
        const KernelArgs args{x, y, 0.0};
        switch (cfg.scenario) {
        case Scenario::ParallelAccel: return d_parallel(args, cfg.kappa, p);
        case Scenario::AntiParallelAccel: return d_antiparallel(args, cfg.kappa, p);
        case Scenario::DeSitterComoving: return d_desitter(args, cfg.kappa, p);
        case Scenario::ThermalInertial: return d_thermal(args, cfg.kappa, p);
        case Scenario::Inertial: return d_inertial(args, cfg.L);
        }
        return 0.0;
    }
};

// y path for kernels with a real pole at y = L (thermal, inertial): a
// half-sine dip below the axis, which is the epsilon -> 0+ prescription.
struct DippedPath {
    double lo = 0, hi = 0, depth = 0;

    cplx y(double t) const
    {
        if (depth == 0 || t <= lo || t >= hi)
            return t;
        return cplx(t, -depth * std::sin(pi * (t - lo) / (hi - lo)));
    }
    cplx dy(double t) const
    {
        if (depth == 0 || t <= lo || t >= hi)
            return 1.0;
        const double k = pi / (hi - lo);
        return cplx(1.0, -depth * k * std::cos(k * (t - lo)));
    }
};

// Three-point polynomial extrapolation to epsilon = 0.
cplx extrapolate_zero(const std::vector<double>& e, const std::vector<cplx>& v)
{
    const std::size_t n = e.size();
    cplx out = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double li = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                li *= (0.0 - e[j]) / (e[i] - e[j]);
        out += li * v[i];
    }
    return out;
}

cplx finish_ladder(const std::vector<double>& eps, const std::vector<cplx>& vals, OracleDiagnostics* diag)
{
    bool monotone = true;
    for (std::size_t i = 2; i < vals.size(); ++i) {
        const double d1 = std::abs(vals[i - 1] - vals[i - 2]);
        const double d2 = std::abs(vals[i] - vals[i - 1]);
        const double floor = 1e-9 * std::abs(vals[i]);
        if (d2 > floor && !(d2 < d1))
            monotone = false;
    }
    const cplx ex = extrapolate_zero(eps, vals);
    if (diag) {
        diag->epsilons = eps;
        diag->values = vals;
        diag->extrapolated = ex;
        diag->monotone = monotone;
    }
    if (!monotone) {
        std::ostringstream os;
        os << "epsilon ladder does not settle:";
        for (std::size_t i = 0; i < vals.size(); ++i)
            os << " eps=" << eps[i] << " -> " << vals[i];
        throw OracleUnreliable(os.str());
    }
    return ex;
}

void oracle_range_guard(const DetectorConfig& cfg)
{
    if (cfg.sigma_omega() > 2.0) {
        std::ostringstream os;
        os << "direct oracle unusable at sigma*Omega = " << cfg.sigma_omega() << " (> 2)";
        throw OracleUnreliable(os.str());
    }
}

std::vector<double> ladder(const DetectorConfig& cfg, const QuadratureSettings& s)
{
    double unit = cfg.sigma;
    if (cfg.kappa > 0)
        unit = std::min(unit, 1.0 / cfg.kappa);
    std::vector<double> e;
    for (double f : s.epsilon_ladder)
        e.push_back(f * unit);
    for (std::size_t i = 1; i < e.size(); ++i)
        if (!(e[i] < e[i - 1]))
            throw PreconditionError("epsilon ladder must be strictly decreasing");
    if (e.size() < 2)
        throw PreconditionError("epsilon ladder needs at least two entries");
    return e;
}

} // namespace

double a_inertial_exact(double so)
{
    // 1 - sqrt(pi) x e^{x^2} erfc(x); direct until e^{x^2} gets close to
    // overflow, then the asymptotic series sum (-1)^{k+1} (2k-1)!! / (2x^2)^k
    if (so < 25)
        return (1.0 - std::sqrt(pi) * so * std::exp(so * so) * std::erfc(so)) / (4 * pi);
    const double z = 1.0 / (2 * so * so);
    double term = z, sum = 0.0;
    for (int k = 1; k < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
        sum += term;
        term *= -(2 * k + 1) * z;
    }
    return sum / (4 * pi);
}

ScaledAmplitude a_shifted(const DetectorConfig& cfg, const QuadratureSettings& s)
{
    validate_for_amplitudes(cfg);
    const double sg = cfg.sigma, c = 2 * sg * sg * cfg.omega, R = radius(cfg, s);
    const bool inertial = cfg.scenario == Scenario::Inertial;
    auto f = [&](double y) -> cplx {
        const cplx ys(y, -c);
        const cplx d = inertial ? d_detect_inertial(ys, 0.0) : d_detect(ys, cfg.kappa, 0.0);
        return std::exp(-y * y / (4 * sg * sg)) * d;
    };
    IntegrationOptions o = outer_options(s);
    o.parallel = false;
    const IntegrationResult r = integrate(f, std::vector<double>{-R, 0.0, R}, o);
    ScaledAmplitude out;
    out.kind = AmplitudeKind::AScaled;
    out.value = WideComplex(std::sqrt(pi) * sg * r.value);
    out.error = std::sqrt(pi) * sg * r.error;
    out.method = "shifted-contour quadrature";
    return out;
}

std::vector<double> shifted_line_crossings(const DetectorConfig& cfg)
{
    std::vector<double> ys;
    if (cfg.scenario != Scenario::AntiParallelAccel)
        return ys;
    const DimensionlessPoint p = reduce(cfg);
    const double r = std::cos(p.w) / p.b;
    if (p.b != 0 && r > 0)
        ys.push_back(2.0 / cfg.kappa * std::abs(std::log(r)));
    return ys;
}

ScaledAmplitude x_shifted_residue_free(const DetectorConfig& cfg, const QuadratureSettings& s)
{
    validate_for_amplitudes(cfg);
    const double sg = cfg.sigma, c = 2 * sg * sg * cfg.omega, R = radius(cfg, s);
    const double q = 1.0 / (4 * sg * sg);
    const ShiftedKernel kern(cfg);

    if (cfg.scenario == Scenario::AntiParallelAccel) {
        const DimensionlessPoint p = reduce(cfg);
        if (std::abs(p.a - 2 * (1 - std::cos(p.w))) < 1e-9)
            throw ResonanceDivergence("shifted-line integral diverges at the critical distance");
    }

    ScaledAmplitude out;
    out.kind = AmplitudeKind::XScaled;
    out.method = "shifted-contour quadrature";
    IntegrationResult r;

    if (cfg.scenario == Scenario::ThermalInertial || cfg.scenario == Scenario::Inertial) {
        // no x dependence: the x integral is 2 sqrt(pi) sigma
        DippedPath path;
        double top = R;
        if (cfg.L < R + cfg.sigma) {
            const double half = std::min(cfg.L / 2, cfg.sigma);
            double depth = std::min(half, cfg.sigma);
            if (cfg.kappa > 0)
                depth = std::min(depth, pi / (2 * cfg.kappa));
            path = {cfg.L - half, cfg.L + half, depth};
            top = std::max(R, path.hi);
        }
        auto f = [&](double t) -> cplx {
            const cplx y = path.y(t);
            return std::exp(-q * y * y) * kern(0.0, y) * path.dy(t);
        };
        std::vector<double> pts{0.0, top};
        if (path.depth > 0) {
            pts.push_back(path.lo);
            pts.push_back(cfg.L);
            pts.push_back(path.hi);
        }
        IntegrationOptions o = outer_options(s);
        o.parallel = false;
        r = integrate(f, pts, o);
        r.value *= -2 * std::sqrt(pi) * sg;
        r.error *= 2 * std::sqrt(pi) * sg;
    } else {
        const std::vector<double> cross = shifted_line_crossings(cfg);
        IntegrationOptions io = inner_options(s);
        // near a_crit the inner peak at x = 0 gets very narrow; keep the
        // best estimate and account for it below
        io.allow_unconverged = true;
        std::vector<double> xpts{-R, R};
        if (cfg.scenario == Scenario::AntiParallelAccel)
            xpts.insert(xpts.begin() + 1, 0.0);
        std::atomic<double> worst{0.0};
        auto inner = [&](double y) -> cplx {
            auto g = [&](double x) -> cplx { return std::exp(-q * (x * x + y * y)) * kern(cplx(x, c), y); };
            const IntegrationResult ri = integrate(g, xpts, io);
            if (!ri.converged) {
                const double rel = ri.error / std::max(std::abs(ri.value), ri.abs_mass * 1e-300);
                double cur = worst.load();
                while (rel > cur && !worst.compare_exchange_weak(cur, rel)) {
                }
            }
            return ri.value;
        };
        std::vector<double> ypts{0.0, R};
        for (double yc : cross)
            if (yc > 0 && yc < R)
                ypts.push_back(yc);
        r = integrate(inner, ypts, outer_options(s));
        r.value = -r.value;
        if (worst.load() > 10 * s.rel_tol) {
            std::ostringstream os;
            os << "x_shifted_residue_free: inner quadrature relative error " << worst.load() << " after "
               << io.max_subdivisions << " intervals";
            throw ConvergenceError(os.str());
        }
        r.error += worst.load() * std::abs(r.value);
    }
    out.value = WideComplex(r.value);
    out.error = r.error;
    out.parts = AmplitudeParts{WideComplex(r.value), WideComplex(0.0)};
    return out;
}

ScaledAmplitude a_direct_oracle(const DetectorConfig& cfg, const QuadratureSettings& s, OracleDiagnostics* diag)
{
    validate_for_amplitudes(cfg);
    oracle_range_guard(cfg);
    const double sg = cfg.sigma, R = radius(cfg, s), W = cfg.omega;
    const double q = 1.0 / (4 * sg * sg);
    const bool inertial = cfg.scenario == Scenario::Inertial;
    const std::vector<double> eps = ladder(cfg, s);
    std::vector<cplx> vals;
    IntegrationOptions o = outer_options(s);
    o.parallel = false;
    for (double e : eps) {
        // the x integral of the window product is 2 sqrt(pi) sigma; the
        // jacobian 1/2 leaves sqrt(pi) sigma
        auto f = [&](double y) -> cplx {
            const cplx d = inertial ? d_detect_inertial(y, e) : d_detect(y, cfg.kappa, e);
            return std::exp(-q * y * y) * std::exp(cplx(0.0, -W * y)) * d;
        };
        // the peak at y = 0 has width e; geometric breakpoints out to R
        std::vector<double> pts{-R, 0.0, R};
        for (double h = e; h < R; h *= 10) {
            pts.push_back(h);
            pts.push_back(-h);
        }
        const IntegrationResult r = integrate(f, pts, o);
        vals.push_back(std::sqrt(pi) * sg * r.value * std::exp(cfg.sigma_omega() * cfg.sigma_omega()));
    }
    ScaledAmplitude out;
    out.kind = AmplitudeKind::AScaled;
    out.value = WideComplex(finish_ladder(eps, vals, diag));
    out.method = "direct oracle";
    return out;
}

ScaledAmplitude x_direct_oracle(const DetectorConfig& cfg, const QuadratureSettings& s, OracleDiagnostics* diag,
                                OracleOrdering ordering)
{
    validate_for_amplitudes(cfg);
    oracle_range_guard(cfg);
    const double sg = cfg.sigma, R = radius(cfg, s), W = cfg.omega, k = cfg.kappa;
    const double q = 1.0 / (4 * sg * sg);
    const std::vector<double> eps = ladder(cfg, s);
    const Scenario sc = cfg.scenario;
    const bool has_traj = sc == Scenario::ParallelAccel || sc == Scenario::AntiParallelAccel || sc == Scenario::Inertial;
    DimensionlessPoint p{};
    if (sc != Scenario::Inertial)
        p = reduce(cfg);

    // real-axis pole curves of the epsilon = 0 integrand, used as breakpoints
    auto x_poles = [&](double y) {
        std::vector<double> xs;
        if (sc == Scenario::ParallelAccel || sc == Scenario::DeSitterComoving) {
            const double sh = std::sinh(k * y / 2);
            if (sh > 0) {
                const double xp = 2.0 / k * std::log(2 * sh / p.a);
                xs.push_back(xp);
                if (sc == Scenario::ParallelAccel && ordering == OracleOrdering::Both)
                    xs.push_back(-xp);
            }
        } else if (sc == Scenario::AntiParallelAccel) {
            const double u = p.b * std::exp(k * y / 2);
            if (u >= 1) {
                const double xp = 2.0 / k * std::acosh(u);
                xs.push_back(-xp);
                xs.push_back(xp);
            }
        }
        return xs;
    };
    std::vector<double> ypts{0.0, R};
    if (sc == Scenario::AntiParallelAccel && p.b > 0 && p.b < 1)
        ypts.push_back(2.0 / k * std::log(1.0 / p.b));
    if (sc == Scenario::ThermalInertial || sc == Scenario::Inertial)
        ypts.push_back(cfg.L);
    ypts.erase(std::remove_if(ypts.begin(), ypts.end(), [&](double y) { return y < 0 || y > R; }), ypts.end());

    const IntegrationOptions io = inner_options(s);
    std::vector<cplx> vals;
    for (double e : eps) {
        auto integrand = [&](double x, double y) -> cplx {
            cplx d;
            if (has_traj) {
                const double t1 = (x + y) / 2, t2 = (x - y) / 2;
                const SpacetimeEvent a1 = trajectory(cfg, Detector::A, t1), b2 = trajectory(cfg, Detector::B, t2);
                d = d_plus_minkowski(a1, b2, e);
                if (ordering == OracleOrdering::Both) {
                    const SpacetimeEvent b1 = trajectory(cfg, Detector::B, t1), a2 = trajectory(cfg, Detector::A, t2);
                    // half the sum, matching the single-kernel normalisation
                    d = 0.5 * (d + d_plus_minkowski(b1, a2, e));
                }
            } else {
                const KernelArgs args{x, y, e};
                d = sc == Scenario::DeSitterComoving ? d_desitter(args, k, p) : d_thermal(args, k, p);
            }
            return std::exp(-q * (x * x + y * y)) * std::exp(cplx(0.0, W * x)) * d;
        };
        auto inner = [&](double y) -> cplx {
            std::vector<double> xpts{-R, R};
            for (double xp : x_poles(y))
                if (xp > -R && xp < R)
                    xpts.push_back(xp);
            return integrate([&](double x) { return integrand(x, y); }, xpts, io).value;
        };
        const IntegrationResult r = integrate(inner, ypts, outer_options(s));
        vals.push_back(-r.value * std::exp(cfg.sigma_omega() * cfg.sigma_omega()));
    }
    ScaledAmplitude out;
    out.kind = AmplitudeKind::XScaled;
    out.value = WideComplex(finish_ladder(eps, vals, diag));
    out.method = "direct oracle";
    return out;
}

} // namespace harvest

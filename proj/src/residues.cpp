#include "harvest/residues.hpp"
#include "harvest/errors.hpp"
#include "harvest/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace harvest {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

// On the imaginary segment theta = i phi everything is real.
struct Vertical {
    DimensionlessPoint p;

    double L(double phi) const { return std::log(std::cos(phi) / p.b); }
    double E(double phi) const
    {
        const double l = L(phi), d = phi - p.w;
        return (l * l - d * d) / (p.g * p.g);
    }
    // I(i phi) * i, i.e. the integrand per unit phi
    double v(double phi, double shift) const
    {
        const double c = std::cos(phi);
        const double e = E(phi);
        if (!std::isfinite(e))
            return 0.0;
        return -std::exp(-e - shift) / (2 * pi * (p.b * p.b - c * c));
    }
    // v at phi0 + t with the pole factor taken from t, not from a difference
    double v_near(double phi0, double t, double shift) const
    {
        const double phi = phi0 + t;
        const double c = std::cos(phi);
        const double dc = -2 * std::sin(phi0 + t / 2) * std::sin(t / 2); // cos(phi) - b
        const double l = std::log1p(dc / p.b), d = phi - p.w;
        const double e = (l * l - d * d) / (p.g * p.g);
        if (!std::isfinite(e))
            return 0.0;
        return std::exp(-e - shift) / (2 * pi * dc * (c + p.b));
    }
    // g^2 E'' / 2 at theta = i phi
    double curvature(double phi) const
    {
        const double t = std::tan(phi), c = std::cos(phi);
        return 1 - t * t + L(phi) / (c * c);
    }
    // Im of exponent_slope at i phi; zero at saddles on the axis
    double h(double phi) const { return L(phi) * std::tan(phi) + phi - p.w; }
};

std::vector<double> marks_around(const std::vector<double>& centers, double g, double lo, double hi)
{
    std::vector<double> pts{lo, hi};
    for (double c : centers)
        for (double k : {0.0, 0.5, 2.0, 6.0, 20.0}) {
            for (double s : {-1.0, 1.0}) {
                const double x = c + s * k * g;
                if (x > lo && x < hi)
                    pts.push_back(x);
            }
        }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi)
{
    const double r = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 100 && b - a > 1e-15 * (1 + std::abs(a)); ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Location and value of the max of f sampled on [lo, hi], refined locally.
std::pair<double, double> sampled_max(const std::function<double(double)>& f, double lo, double hi, int n)
{
    double best = -std::numeric_limits<double>::infinity(), at = lo;
    const double step = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + i * step;
        const double v = f(x);
        if (v > best) {
            best = v;
            at = x;
        }
    }
    const double a = std::max(lo, at - step), b = std::min(hi, at + step);
    const double x = golden_max(f, a, b);
    const double v = f(x);
    if (v > best)
        return {x, v};
    return {at, best};
}

IntegrationOptions residue_options(const QuadratureSettings& s)
{
    IntegrationOptions o;
    o.abs_tol = 0.0;
    o.rel_tol = s.rel_tol;
    o.max_subdivisions = std::max(s.max_subdivisions, 8000);
    o.allow_unconverged = true;
    return o;
}

// Sums contour pieces; only the total is held to a tolerance.
struct PieceSum {
    cplx value = 0.0;
    double error = 0.0;
    std::string log;

    cplx add(const IntegrationResult& r, const char* name)
    {
        value += r.value;
        error += r.error;
        if (!r.converged) {
            std::ostringstream os;
            os << " [" << name << ": " << r.value << " +- " << r.error << "]";
            log += os.str();
        }
        return r.value;
    }
};

} // namespace

ThetaPoint theta_of_y(double y, Branch br, const DimensionlessPoint& p, double kappa)
{
    if (y < 0)
        throw PreconditionError("theta_of_y needs y >= 0");
    ThetaPoint t;
    t.branch = br;
    if (br == Branch::Plus) {
        const double u = p.b * std::exp(y * kappa / 2);
        if (u >= 1) {
            t.theta = -std::acosh(u);
            t.on_real_axis = true;
        } else if (u > -1) {
            t.theta = I * std::acos(u);
        } else {
            t.theta = -std::acosh(-u) + I * pi;
        }
    } else {
        const double u = p.b * std::exp(-y * kappa / 2);
        if (u >= 1) {
            t.theta = std::acosh(u);
            t.on_real_axis = true;
        } else if (u > -1) {
            t.theta = I * std::acos(u);
        } else {
            t.theta = std::acosh(-u) + I * pi;
        }
    }
    return t;
}

bool pole_included(double y, Branch br, const DimensionlessPoint& p, double kappa)
{
    if (!(p.w < pi))
        throw PreconditionError("pole_included needs w < pi");
    const double s = br == Branch::Plus ? 1.0 : -1.0;
    return p.b * std::exp(s * y * kappa / 2) > std::cos(p.w);
}

cplx residue_of_kernel(cplx ts, cplx to, double kappa)
{
    const cplx cs = std::cosh(ts), co = std::cosh(to);
    const cplx den = cs - co;
    if (!(std::abs(den) > 1e-12 * (std::abs(cs) + std::abs(co))))
        throw DegeneratePole("theta_+ and theta_- coincide: double pole");
    return kappa / (8 * pi * pi) / std::sinh(ts) / den;
}

cplx exponent_E(cplx th, const DimensionlessPoint& p)
{
    const cplx l = std::log(std::cosh(th) / p.b);
    const cplx d = th - I * p.w;
    return (l * l + d * d) / (p.g * p.g);
}

cplx exponent_slope(cplx th, const DimensionlessPoint& p)
{
    return std::log(std::cosh(th) / p.b) * std::tanh(th) + th - I * p.w;
}

cplx integrand_I(cplx th, const DimensionlessPoint& p)
{
    const cplx c = std::cosh(th);
    const cplx den = p.b * p.b - c * c;
    if (!(std::abs(den) > 1e-12 * (p.b * p.b + std::norm(c))))
        throw SingularEvaluation("integrand_I: cosh^2 theta = b^2");
    return I / (2 * pi * den) * std::exp(-exponent_E(th, p));
}

cplx find_saddle(const DimensionlessPoint& p, const Segment& seg)
{
    auto f = [&](cplx th) { return exponent_slope(th, p); };
    cplx best = seg.from;
    double fb = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 64; ++i) {
        const cplx th = seg.from + (seg.to - seg.from) * ((i + 0.5) / 64.0);
        const double v = std::abs(f(th));
        if (std::isfinite(v) && v < fb) {
            fb = v;
            best = th;
        }
    }
    cplx th = best;
    cplx fv = f(th);
    for (int it = 0; it < 100; ++it) {
        if (std::abs(fv) < 1e-10)
            return th;
        const double hs = 1e-6 * (1 + std::abs(th));
        const cplx d = (f(th + hs) - f(th - hs)) / (2 * hs);
        if (d == 0.0 || !std::isfinite(std::abs(d)))
            break;
        cplx step = -fv / d;
        double lambda = 1.0;
        bool moved = false;
        for (int k = 0; k < 30; ++k) {
            const cplx trial = th + lambda * step;
            const cplx ft = f(trial);
            if (std::isfinite(std::abs(ft)) && std::abs(ft) < std::abs(fv)) {
                th = trial;
                fv = ft;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved)
            break;
    }
    if (std::abs(fv) < 1e-10)
        return th;
    std::ostringstream os;
    os << "saddle search did not converge near " << th << " (|E'| g^2/2 = " << std::abs(fv) << ")";
    throw ConvergenceError(os.str());
}

namespace {

// saddles of E on the imaginary axis in (lo, hi): sign changes of h
std::vector<double> axis_saddles(const Vertical& vert, double lo, double hi)
{
    std::vector<double> roots;
    const int n = 2048;
    const double a0 = lo + 1e-12, a1 = hi - 1e-12;
    double xp = a0, hp = vert.h(a0);
    for (int i = 1; i <= n; ++i) {
        const double x = a0 + (a1 - a0) * i / n;
        const double hx = vert.h(x);
        if (std::isfinite(hp) && std::isfinite(hx) && ((hp < 0) != (hx < 0))) {
            double u = xp, v = x, hu = hp;
            for (int k = 0; k < 200 && v - u > 1e-15; ++k) {
                const double m = 0.5 * (u + v);
                const double hm = vert.h(m);
                if ((hm < 0) == (hu < 0)) {
                    u = m;
                    hu = hm;
                } else {
                    v = m;
                }
            }
            double r = 0.5 * (u + v);
            try {
                const cplx z = find_saddle(vert.p, Segment{I * u, I * v});
                if (std::abs(z.real()) < 1e-8 && z.imag() > lo && z.imag() < hi)
                    r = z.imag();
            } catch (const ConvergenceError&) {
            }
            roots.push_back(r);
        }
        xp = x;
        hp = hx;
    }
    return roots;
}

// g^2 E, free of g
cplx landscape(cplx th, const DimensionlessPoint& p)
{
    const cplx l = std::log(std::cosh(th) / p.b);
    const cplx d = th - I * p.w;
    return l * l + d * d;
}

double landscape_re(cplx th, const DimensionlessPoint& p)
{
    const double v = landscape(th, p).real();
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

// I(theta) exp(-S); zero where the exponent overflows to +inf
cplx scaled_I(cplx th, const DimensionlessPoint& p, double S)
{
    const cplx c = std::cosh(th);
    const cplx e = exponent_E(th, p);
    if (!std::isfinite(e.real()))
        return 0.0;
    return I / (2 * pi * (p.b * p.b - c * c)) * std::exp(-e - S);
}

// Off-axis saddles in Re < 0, 0 < Im < pi/2.
std::vector<cplx> off_axis_saddles(const DimensionlessPoint& p)
{
    std::vector<cplx> out;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const cplx z0(-3.0 + 2.95 * i / 15.0, 0.05 + (pi / 2 - 0.1) * j / 15.0);
            cplx z;
            try {
                z = find_saddle(p, Segment{z0, z0});
            } catch (const ConvergenceError&) {
                continue;
            }
            if (!(z.real() < -1e-8 && z.imag() > 1e-8 && z.imag() < pi / 2 - 1e-8))
                continue;
            bool seen = false;
            for (const cplx& o : out)
                seen = seen || std::abs(o - z) < 1e-7;
            if (!seen)
                out.push_back(z);
        }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.imag() > b.imag(); });
    return out;
}

enum class TraceEnd { Bad, Top, Left };

struct Trace {
    std::vector<cplx> pts;
    TraceEnd end = TraceEnd::Bad;
};

// Steepest-descent curve of E leaving the saddle s along d: Im E fixed,
// Re E rising. Stops at i pi/2, or far enough left that a vertical drop
// to the real axis stays `gap` above the saddle level.
Trace sd_trace(const DimensionlessPoint& p, cplx s, cplx d, double gap)
{
    const cplx top(0.0, pi / 2);
    const double Fs = landscape(s, p).real();
    auto dir = [&](cplx th) {
        const cplx sl = exponent_slope(th, p);
        const double m = std::abs(sl);
        return (m > 0 && std::isfinite(m)) ? std::conj(sl) / m : cplx(0.0);
    };
    auto drop_ok = [&](cplx th) {
        for (int k = 0; k <= 64; ++k)
            if (landscape_re(cplx(th.real(), th.imag() * k / 64.0), p) < Fs + gap)
                return false;
        return true;
    };
    Trace t;
    const double r0 = std::min(p.g, 1.0) / 8;
    cplx th = s + r0 * d;
    t.pts = {s, th};
    for (int it = 0; it < 200000; ++it) {
        const double dist = std::abs(th - s);
        double ds = std::min(0.01, std::max(r0, 0.05 * dist));
        ds = std::min(ds, 0.25 * std::abs(th - top));
        const cplx k1 = dir(th);
        const cplx k2 = dir(th + 0.5 * ds * k1);
        const cplx k3 = dir(th + 0.5 * ds * k2);
        const cplx k4 = dir(th + ds * k3);
        const cplx step = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        if (std::abs(step) == 0.0)
            return t;
        th += ds * step;
        t.pts.push_back(th);
        if (std::abs(th - top) < 1e-6) {
            t.pts.back() = top;
            t.end = TraceEnd::Top;
            return t;
        }
        if (th.real() > 1e-12 || th.imag() < 0 || th.imag() > pi / 2 || th.real() < -50)
            return t;
        if (th.real() < -0.25 && (it % 16 == 0) && landscape_re(th, p) > Fs + gap && drop_ok(th)) {
            t.end = TraceEnd::Left;
            return t;
        }
    }
    return t;
}

// Winding number of the closed polygon about q.
int winding(const std::vector<cplx>& loop, cplx q)
{
    double turn = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const cplx a = loop[k] - q, b = loop[(k + 1) % loop.size()] - q;
        turn += std::arg(b / a);
    }
    return static_cast<int>(std::lround(turn / (2 * pi)));
}

IntegrationResult integrate_polyline(const std::vector<cplx>& pts, const DimensionlessPoint& p, double S,
                                     IntegrationOptions opt)
{
    std::vector<double> u(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k)
        u[k] = static_cast<double>(k);
    auto f = [&](double x) -> cplx {
        const std::size_t k = std::min(static_cast<std::size_t>(x), pts.size() - 2);
        const cplx dz = pts[k + 1] - pts[k];
        return scaled_I(pts[k] + (x - static_cast<double>(k)) * dz, p, S) * dz;
    };
    opt.max_subdivisions = std::max<int>(opt.max_subdivisions, static_cast<int>(pts.size()) + 8000);
    return integrate(f, u, opt);
}

} // namespace

ScaledAmplitude residue_contribution(const DetectorConfig& cfg, const QuadratureSettings& s, ResidueDiagnostics* diag)
{
    validate_for_amplitudes(cfg);
    if (cfg.scenario != Scenario::AntiParallelAccel)
        throw PreconditionError("residue terms exist only for anti-parallel detectors");
    const DimensionlessPoint p = reduce(cfg);
    const double b = p.b, w = p.w, g = p.g;
    if (b == 0)
        throw PreconditionError("b = 0 (L kappa = 2) separates the two residue cases; move off the boundary");

    ScaledAmplitude out;
    out.kind = AmplitudeKind::XScaled;
    ResidueDiagnostics d;
    d.contour.rcase = b > 0 ? ResidueCase::BPositive : ResidueCase::BNegative;

    if (b < 0 && w <= pi / 2) {
        out.value = WideComplex(0.0);
        out.method = "no poles crossed";
        out.parts = AmplitudeParts{WideComplex(0.0), out.value};
        d.path = out.method;
        if (diag)
            *diag = d;
        return out;
    }

    const Vertical vert{p};
    const IntegrationOptions opt = residue_options(s);
    const double phi0 = std::acos(b);
    if (std::abs(phi0 - w) < 1e-12)
        throw ResonanceDivergence("residue pole sits on the contour end at the critical distance");
    const double E0 = -(phi0 - w) * (phi0 - w) / (g * g); // E at the pole
    const double pole_pref = 1.0 / (4 * pi * b * std::sin(phi0));

    PieceSum acc;

    // integral of v over [lo, hi], principal value at phi0
    auto axis_integral = [&](double lo, double hi, double S, std::vector<double> centers) -> cplx {
        auto vfun = [&](double phi) -> cplx { return vert.v(phi, S); };
        centers.push_back(phi0);
        if (!(phi0 > lo && phi0 < hi))
            return acc.add(integrate(vfun, marks_around(centers, g, lo, hi), opt), "vertical");
        const double R = -std::exp(-E0 - S) * pole_pref; // residue of v at phi0
        const double hw = std::min(phi0 - lo, hi - phi0);
        auto sym = [&](double t) -> cplx { return vert.v_near(phi0, t, S) + vert.v_near(phi0, -t, S); };
        std::vector<double> tc;
        for (double c : centers)
            tc.push_back(std::abs(c - phi0));
        cplx sum = acc.add(integrate(sym, marks_around(tc, g, 0.0, hw), opt), "principal value");
        // the far side, with the pole subtracted
        auto sub = [&](double phi) -> cplx { return vert.v_near(phi0, phi - phi0, S) - R / (phi - phi0); };
        if (phi0 - hw > lo) {
            sum += acc.add(integrate(sub, marks_around(centers, g, lo, phi0 - hw), opt), "vertical");
            sum += R * std::log(hw / (phi0 - lo));
        }
        if (phi0 + hw < hi) {
            sum += acc.add(integrate(sub, marks_around(centers, g, phi0 + hw, hi), opt), "vertical");
            sum += R * std::log((hi - phi0) / hw);
        }
        return sum;
    };
    auto negE_v = [&](double phi) {
        const double e = vert.E(phi);
        return std::isfinite(e) ? -e : -std::numeric_limits<double>::infinity();
    };

    if (b < 0) {
        const double lo = pi / 2, hi = w;
        const std::vector<double> roots = axis_saddles(vert, lo, hi);
        for (double r : roots)
            d.saddles.push_back(I * r);
        auto [vpeak, S] = sampled_max(negE_v, lo, hi, 4096);
        if (phi0 > lo && phi0 < hi)
            S = std::max(S, -E0);
        for (double r : roots)
            S = std::max(S, negE_v(r));
        d.log_scale = S;
        std::vector<double> centers{vpeak};
        centers.insert(centers.end(), roots.begin(), roots.end());
        const cplx total = axis_integral(lo, hi, S, centers);
        d.contour.segments.push_back({I * (pi / 2), I * w});
        if (!(acc.error <= 1e-6 * std::abs(total)) && std::abs(total) > 0) {
            std::ostringstream os;
            os << "residue contour quadrature: error " << acc.error << " on " << std::abs(total) << acc.log;
            throw ConvergenceError(os.str());
        }
        d.quadrature = WideComplex(total, S);
        out.error = acc.error;
        cplx sd = 0.0;
        bool have_sd = false, below = false;
        for (double r : roots) {
            below = below || r < w;
            const double c2 = vert.curvature(r);
            if (c2 < 0) {
                sd += vert.v(r, S) * std::sqrt(2 * pi / (-2 * c2 / (g * g)));
                have_sd = true;
            }
        }
        // a usable saddle must sit below i w
        have_sd = have_sd && below;
        d.sd_available = have_sd;
        if (have_sd) {
            d.steepest_descent = WideComplex(sd, S);
            d.sd_relative_difference = std::abs(sd - total) / std::max(std::abs(total), 1e-300);
        }
        d.contour.validity = (have_sd && d.sd_relative_difference < 0.02) ? ResidueValidity::SteepestDescentOK
                                                                           : ResidueValidity::NumericFallback;
        d.path = "vertical segment quadrature";
        out.value = d.quadrature;
        out.method = "residue contour quadrature";
        out.parts = AmplitudeParts{WideComplex(0.0), out.value};
        if (diag)
            *diag = d;
        return out;
    }

    // b > 0. The original contour runs i m -> 0 -> -X. It is replaced by an
    // axis piece i m -> i phi_end plus a polyline from i phi_end that ends on
    // the real axis, chosen so the oscillating part never sits above the
    // saddle level. Pole bookkeeping comes from a winding number.
    const double m = std::min(w, pi / 2);
    const std::vector<double> roots = axis_saddles(vert, 0.0, pi / 2);
    for (double r : roots)
        d.saddles.push_back(I * r);

    double phi_end = 0.0;
    std::vector<cplx> poly;
    cplx saddle_dir = 0.0;
    cplx off_saddle = 0.0;
    enum class Route { Horizontal, Descent, Corner } route = Route::Corner;
    double hpeak = 0.0, T = 0.0;

    // (1) horizontal line through an axis saddle that tops it
    for (double r : roots) {
        if (vert.curvature(r) <= 0)
            continue;
        const double Fr = landscape_re(cplx(0.0, r), p);
        bool tops = true;
        for (int k = 1; k <= 512 && tops; ++k) {
            const double t = 4.0 * k / 512;
            tops = landscape_re(cplx(-t, r), p) >= Fr - 1e-12 * (1 + std::abs(Fr));
        }
        if (tops) {
            phi_end = r;
            route = Route::Horizontal;
            break;
        }
    }
    // (2) steepest descent through an off-axis saddle, from i pi/2 to the left
    if (route == Route::Corner) {
        for (const cplx& sd : off_axis_saddles(p)) {
            const double hs = 1e-6 * (1 + std::abs(sd));
            const cplx e2 = (exponent_slope(sd + hs, p) - exponent_slope(sd - hs, p)) / (2 * hs);
            const cplx dd = std::exp(-0.5 * I * std::arg(e2));
            const double gap = std::max(60 * g * g, 1e-3);
            Trace t1 = sd_trace(p, sd, dd, gap), t2 = sd_trace(p, sd, -dd, gap);
            if (t1.end == TraceEnd::Left && t2.end == TraceEnd::Top)
                std::swap(t1, t2);
            if (!(t1.end == TraceEnd::Top && t2.end == TraceEnd::Left))
                continue;
            poly.assign(t1.pts.rbegin(), t1.pts.rend());
            poly.insert(poly.end(), t2.pts.begin() + 1, t2.pts.end());
            const cplx last = poly.back();
            for (int k = 1; k <= 16; ++k)
                poly.push_back(cplx(last.real(), last.imag() * (1 - k / 16.0)));
            phi_end = pi / 2;
            off_saddle = sd;
            saddle_dir = t2.pts[1] - t2.pts[0];
            saddle_dir /= std::abs(saddle_dir);
            route = Route::Descent;
            d.saddles.push_back(sd);
            break;
        }
    }

    // log scale over the axis piece and the pole
    const double alo = std::min(m, phi_end), ahi = std::max(m, phi_end);
    double vpeak = alo, S = -std::numeric_limits<double>::infinity();
    if (ahi > alo) {
        auto pk = sampled_max(negE_v, alo, ahi, 4096);
        vpeak = pk.first;
        S = pk.second;
    }
    if (phi0 < ahi)
        S = std::max(S, -E0);
    for (double r : roots)
        if (r > alo && r < ahi)
            S = std::max(S, negE_v(r));

    if (route == Route::Descent) {
        for (const cplx& z : poly)
            S = std::max(S, -landscape_re(z, p) / (g * g));
    } else {
        // horizontal line at phi_end, long enough for the tail to sit 80 below
        auto negE_h = [&](double t) { return -exponent_E(cplx(-t, phi_end), p).real(); };
        // the drop to the real axis at -T must be as quiet as the tail
        auto drop_max = [&](double t) {
            double mx = -std::numeric_limits<double>::infinity();
            for (int k = 0; k <= 64; ++k)
                mx = std::max(mx, -exponent_E(cplx(-t, phi_end * k / 64.0), p).real());
            return mx;
        };
        T = std::max(12 * g + std::abs(std::log(b)), 0.5);
        for (int k = 0; k < 60; ++k) {
            auto [at, val] = sampled_max(negE_h, 0.0, T, 4096);
            hpeak = at;
            const double top = std::max(S, val);
            if (negE_h(T) < top - 80 && drop_max(T) < top - 80) {
                S = top;
                break;
            }
            T *= 1.5;
        }
        poly.clear();
        for (double t : marks_around({0.0, hpeak}, g, 0.0, T))
            poly.push_back(cplx(-t, phi_end));
        if (phi_end > 0)
            for (int k = 1; k <= 16; ++k)
                poly.push_back(cplx(-T, phi_end * (1 - k / 16.0)));
    }
    // compare with the original contour around the pole
    const double X = -poly.back().real();
    const bool on_c0 = phi0 < m;
    const bool on_gamma = phi0 > alo && phi0 < ahi;
    cplx q(0.0, phi0);
    if (on_c0)
        q -= 1e-7; // right of downward travel
    else if (on_gamma)
        q += 1e-7; // right of upward travel
    std::vector<cplx> loop{I * m, 0.0, cplx(-X, 0.0)};
    for (auto it = poly.rbegin(); it != poly.rend(); ++it)
        loop.push_back(*it);
    const double pole_coef = double(on_c0) - double(on_gamma) + 2.0 * winding(loop, q);
    if (pole_coef != 0)
        S = std::max(S, -E0);

    d.log_scale = S;
    d.horizontal_height = route == Route::Descent ? off_saddle.imag() : phi_end;

    // axis piece, travelled from m to phi_end
    cplx total = 0.0;
    if (ahi > alo) {
        std::vector<double> centers{vpeak};
        centers.insert(centers.end(), roots.begin(), roots.end());
        const double sgn = phi_end > m ? 1.0 : -1.0;
        total += sgn * axis_integral(alo, ahi, S, centers);
        d.contour.segments.push_back({I * m, I * phi_end});
    }
    {
        IntegrationOptions popt = opt;
        popt.abs_tol = 1e-3 * s.rel_tol * std::max(std::abs(total), std::exp(std::min(0.0, -E0 - S)));
        total += acc.add(integrate_polyline(poly, p, S, popt), route == Route::Descent ? "descent" : "horizontal");
        for (std::size_t k = 0; k + 1 < poly.size(); k += std::max<std::size_t>(1, poly.size() / 8))
            d.contour.segments.push_back({poly[k], poly[std::min(poly.size() - 1, k + poly.size() / 8)]});
    }

    const cplx corr = pole_coef == 0 ? cplx(0.0) : I * pi * pole_coef * (-std::exp(-E0 - S) * pole_pref);
    total += corr;

    if (!(acc.error <= 1e-6 * std::abs(total)) && std::abs(total) > 0) {
        std::ostringstream os;
        os << "residue contour quadrature: error " << acc.error << " on " << std::abs(total) << acc.log;
        throw ConvergenceError(os.str());
    }
    const WideComplex quad(total, S);
    d.quadrature = quad;
    out.error = acc.error;

    // steepest-descent estimate from the same saddles
    cplx sd = corr;
    bool have_sd = false;
    const double sg = phi_end > m ? 1.0 : -1.0;
    for (double r : roots) {
        if (!(r > alo && r < ahi))
            continue;
        const double c2 = vert.curvature(r);
        if (c2 < 0) {
            sd += sg * vert.v(r, S) * std::sqrt(2 * pi / (-2 * c2 / (g * g)));
            have_sd = true;
        }
    }
    if (route == Route::Horizontal && phi_end > 0) {
        const double e2 = 2 * vert.curvature(phi_end) / (g * g);
        sd += -scaled_I(cplx(0.0, phi_end), p, S) * std::sqrt(pi / (2 * e2));
        have_sd = true;
    } else if (route == Route::Descent) {
        const cplx e2 = 2.0 / (g * g) * (exponent_slope(off_saddle + 1e-7, p) - exponent_slope(off_saddle - 1e-7, p)) / 2e-7;
        sd += scaled_I(off_saddle, p, S) * saddle_dir * std::sqrt(2 * pi / std::abs(e2));
        have_sd = true;
    }
    d.sd_available = have_sd;
    if (have_sd) {
        d.steepest_descent = WideComplex(sd, S);
        d.sd_relative_difference = std::abs(sd - total) / std::max(std::abs(total), 1e-300);
    }
    d.contour.validity = (have_sd && d.sd_relative_difference < 0.02) ? ResidueValidity::SteepestDescentOK
                                                                       : ResidueValidity::NumericFallback;
    switch (route) {
    case Route::Horizontal:
        d.path = "axis + horizontal through axis saddle";
        break;
    case Route::Descent:
        d.path = "axis + steepest descent through off-axis saddle";
        break;
    case Route::Corner:
        d.path = "axis + real line (no saddle found)";
        break;
    }

    out.value = quad;
    out.method = "residue contour quadrature";
    out.parts = AmplitudeParts{WideComplex(0.0), quad};
    if (diag)
        *diag = d;
    return out;
}

} // namespace harvest

#include "harvest/scan.hpp"
#include "harvest/errors.hpp"
#include "harvest/residues.hpp"
#include "harvest/saddle.hpp"

#include <boost/math/tools/roots.hpp>
#include <omp.h>

#include <cmath>
#include <limits>
#include <sstream>

namespace harvest {

namespace {

constexpr double pi = std::numbers::pi;

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

ScanGrid make_grid(const GridSpec& spec)
{
    if (spec.a_n < 1 || spec.w_n < 1)
        throw PreconditionError("grid needs at least one point per axis");
    if (!(spec.w_min >= 0 && spec.w_max < pi && spec.w_max > spec.w_min))
        throw PreconditionError("w range must lie in (0, pi)");
    if (!(spec.a_max > spec.a_min && spec.a_min >= 0))
        throw PreconditionError("a range must be increasing and positive");
    if (!(spec.g > 0))
        throw PreconditionError("g = kappa*sigma must be > 0");
    ScanGrid out;
    out.spec = spec;
    out.a_axis = open_closed_axis(spec.a_min, spec.a_max, spec.a_n);
    out.w_axis = open_closed_axis(spec.w_min, spec.w_max, spec.w_n);
    out.cells.resize(static_cast<std::size_t>(spec.a_n) * spec.w_n);
    return out;
}

double resonance_tolerance(const GridSpec& spec) { return 0.5 * (spec.a_max - spec.a_min) / spec.a_n; }

void check_corridor_window(double w, double a)
{
    if (!(w > 1.2 && w < pi / 2 && a > 1.1 && a < 2)) {
        std::ostringstream os;
        os << "corridor protocol needs 1.2 < kappa*sigma^2*Omega < pi/2 and 1.1 < L_crit*kappa < 2 (got w=" << w
           << ", a=" << a << ")";
        throw PreconditionError(os.str());
    }
}

WideReal negativity_at(const DetectorConfig& cfg, Method m, const QuadratureSettings& s)
{
    return negativity(assemble(cfg, m, s).state);
}

} // namespace

std::string flags_string(unsigned flags)
{
    std::string out;
    auto add = [&](const char* s) {
        if (!out.empty())
            out += '|';
        out += s;
    };
    if (flags & CellResonance)
        add("resonance");
    if (flags & CellForcedQuad)
        add("forced_quadrature");
    if (flags & CellFailed)
        add("failed");
    return out.empty() ? "-" : out;
}

std::vector<double> open_closed_axis(double lo, double hi, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * (i + 1) / n;
    return v;
}

Cell evaluate_cell(const GridSpec& spec, double a, double w, double resonance_tol)
{
    Cell c;
    c.a = a;
    c.w = w;
    Method m = spec.method;
    const bool anti = spec.scenario == Scenario::AntiParallelAccel;
    if (anti && std::abs(a - 2 * (1 - std::cos(w))) < resonance_tol) {
        c.flags |= CellResonance;
        if (m != Method::Quadrature)
            c.flags |= CellForcedQuad;
        m = Method::Quadrature;
    }
    c.path = std::string(to_string(m)) + (anti ? "+residue" : "");
    try {
        const DetectorConfig cfg = config_from_point(spec.scenario, a, w, spec.g, spec.sigma);
        const Assembly as = assemble(cfg, m, spec.quad);
        c.A = as.state.A;
        c.log_abs_X = as.state.X.log_abs();
        c.N = negativity(as.state);
        c.entangled = c.N.positive();
    } catch (const std::exception& e) {
        c.flags |= CellFailed;
        c.error = e.what();
        c.N = WideReal{};
        c.entangled = false;
    }
    return c;
}

ScanGrid grid_scan(const GridSpec& spec)
{
    ScanGrid g = make_grid(spec);
    const double tol = resonance_tolerance(spec);
    const long na = spec.a_n, total = na * spec.w_n;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(spec.threads))
    for (long k = 0; k < total; ++k)
        g.cells[k] = evaluate_cell(spec, g.a_axis[k % na], g.w_axis[k / na], tol);
    return g;
}

ScanGrid grid_scan_serial(const GridSpec& spec)
{
    ScanGrid g = make_grid(spec);
    const double tol = resonance_tolerance(spec);
    const long na = spec.a_n, total = na * spec.w_n;
    for (long k = 0; k < total; ++k)
        g.cells[k] = evaluate_cell(spec, g.a_axis[k % na], g.w_axis[k / na], tol);
    return g;
}

double boundary_trace(Scenario s, double w)
{
    auto margin = [&](double a) { return criterion(s, a, w).margin; };
    const double lo = 1e-12, hi = 10.0;
    if (!(margin(lo) > 0 && margin(hi) < 0))
        throw PreconditionError("criterion margin does not change sign on (0, 10]");
    auto tol = [](double u, double v) { return std::abs(v - u) < 1e-11; };
    const auto r = boost::math::tools::bisect(margin, lo, hi, tol);
    return 0.5 * (r.first + r.second);
}

std::vector<ResonancePoint> resonance_locus(const std::vector<double>& w_values, double kappa, double sigma)
{
    if (!(kappa > 0 && sigma > 0))
        throw PreconditionError("resonance locus needs kappa > 0 and sigma > 0");
    std::vector<ResonancePoint> out;
    for (double w : w_values) {
        if (!(w > 0 && w <= pi))
            throw PreconditionError("resonance locus needs 0 < w <= pi");
        ResonancePoint p;
        p.w = w;
        p.a_crit = 2 * (1 - std::cos(w));
        p.L_crit = p.a_crit / kappa;
        p.omega = w / (kappa * sigma * sigma);
        out.push_back(p);
    }
    return out;
}

std::vector<double> symlog_axis(double max, double min_frac, int n_side)
{
    if (!(max > 0 && min_frac > 0 && min_frac < 1 && n_side >= 2))
        throw PreconditionError("symlog axis needs max > 0, 0 < min_frac < 1, n_side >= 2");
    std::vector<double> pos(n_side);
    const double l0 = std::log10(min_frac);
    for (int i = 0; i < n_side; ++i)
        pos[i] = max * std::pow(10.0, l0 * (1.0 - static_cast<double>(i) / (n_side - 1)));
    std::vector<double> out;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it)
        out.push_back(-*it);
    out.insert(out.end(), pos.begin(), pos.end());
    return out;
}

std::vector<double> linear_axis(double lo, double hi, int n)
{
    if (n < 2)
        throw PreconditionError("linear axis needs n >= 2");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

std::optional<std::pair<double, double>> sign_change_interval(const std::vector<CorridorPoint>& pts)
{
    int first = -1, last = -1;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        if (pts[i].ok && pts[i].reX > 0) {
            if (first < 0)
                first = i;
            last = i;
        }
    if (first <= 0 || last + 1 >= static_cast<int>(pts.size()))
        return std::nullopt;
    const CorridorPoint &l = pts[first - 1], &r = pts[last + 1];
    if (!(l.ok && r.ok && l.reX < 0 && r.reX < 0))
        return std::nullopt;
    return std::make_pair(l.dL, r.dL);
}

CorridorSweep corridor_sweep(double kappa, double sigma, double omega, const std::vector<double>& dL,
                             const QuadratureSettings& s, int threads)
{
    CorridorSweep out;
    out.kappa = kappa;
    out.sigma = sigma;
    out.omega = omega;
    out.L_crit = critical_distance(kappa, sigma, omega);
    check_corridor_window(kappa * sigma * sigma * omega, kappa * out.L_crit);
    out.points.resize(dL.size());
    const long n = static_cast<long>(dL.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(threads))
    for (long i = 0; i < n; ++i) {
        CorridorPoint& p = out.points[i];
        p.dL = dL[i];
        DetectorConfig cfg;
        cfg.scenario = Scenario::AntiParallelAccel;
        cfg.kappa = kappa;
        cfg.sigma = sigma;
        cfg.omega = omega;
        cfg.L = out.L_crit + dL[i];
        p.a = kappa * cfg.L;
        try {
            const cplx x = x_shifted_residue_free(cfg, s).v();
            p.reX = x.real();
            p.imX = x.imag();
        } catch (const std::exception& e) {
            p.ok = false;
            p.error = e.what();
            p.reX = p.imX = std::numeric_limits<double>::quiet_NaN();
        }
        try {
            p.residue_log_abs = residue_contribution(cfg, s).value.log_abs();
        } catch (const std::exception&) {
            p.residue_log_abs = std::numeric_limits<double>::quiet_NaN();
        }
    }
    out.sign_change_interval = sign_change_interval(out.points);
    return out;
}

std::vector<CorridorVerdict> rangefind_corridor(const std::vector<DetectorConfig>& cfgs, std::uint64_t shots,
                                                std::uint64_t seed, const QuadratureSettings& s)
{
    std::vector<CorridorVerdict> out;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        const DetectorConfig& cfg = cfgs[i];
        if (cfg.scenario != Scenario::AntiParallelAccel)
            throw PreconditionError("corridor rangefinding uses anti-parallel detectors");
        check_corridor_window(cfg.w(), 2 * (1 - std::cos(cfg.w())));
        TwoDetectorState st;
        st.A = a_shifted(cfg, s).v().real();
        st.X = x_shifted_residue_free(cfg, s).value;
        const TwoDetectorState raw = rescaled_for_sampling(st);
        CorridorVerdict v;
        v.L = cfg.L;
        v.seed_xx = seed ^ (2 * i);
        v.seed_yy = seed ^ (2 * i + 1);
        const MeasurementRecord xx = sample_measurements(raw, Basis::XX, shots, v.seed_xx);
        const MeasurementRecord yy = sample_measurements(raw, Basis::YY, shots, v.seed_yy);
        v.estimate = yy.correlator() - xx.correlator();
        v.std_error = std::hypot(xx.std_error(), yy.std_error());
        const auto [cxx, cyy] = correlators(raw);
        v.truth = cyy - cxx;
        v.at_critical = v.estimate > 0;
        out.push_back(v);
    }
    return out;
}

SuddenDeath rangefind_sudden_death(double kappa, double sigma, double omega, double delta, Method m,
                                   const QuadratureSettings& s)
{
    const double w = kappa * sigma * sigma * omega;
    if (!(w >= 2.4)) {
        std::ostringstream os;
        os << "sudden-death protocol needs kappa*sigma^2*Omega >= 2.4 (got " << w << ")";
        throw PreconditionError(os.str());
    }
    if (!(delta > 0 && delta < 2 / kappa))
        throw PreconditionError("delta must lie in (0, 2/kappa)");
    DetectorConfig cfg;
    cfg.scenario = Scenario::AntiParallelAccel;
    cfg.kappa = kappa;
    cfg.sigma = sigma;
    cfg.omega = omega;
    SuddenDeath out;
    cfg.L = 2 / kappa + delta;
    out.N_above = negativity_at(cfg, m, s);
    cfg.L = 2 / kappa - delta;
    out.N_below = negativity_at(cfg, m, s);
    out.above = out.N_above.positive();
    out.below = out.N_below.positive();
    out.trigger = out.above && !out.below;
    return out;
}

GradientEstimate rangefind_gradient(const DetectorConfig& reference, const WideReal& measured_N, Method m,
                                    const QuadratureSettings& s)
{
    GradientEstimate out;
    const double L = reference.L, h = 1e-3 * L;
    DetectorConfig c = reference;
    out.N_ref = negativity_at(c, m, s);
    c.L = L + h;
    const WideReal up = negativity_at(c, m, s);
    c.L = L - h;
    const WideReal dn = negativity_at(c, m, s);
    if (!(out.N_ref.positive() && up.positive() && dn.positive())) {
        out.ill_conditioned = true;
        out.log_abs_dN_dL = -std::numeric_limits<double>::infinity();
        return out;
    }
    out.dlogN_dL = (up.log_value - dn.log_value) / (2 * h);
    out.log_abs_dN_dL = out.N_ref.log_value + std::log(std::abs(out.dlogN_dL));
    out.ill_conditioned = !(std::abs(out.dlogN_dL) * h > 1e-9);
    if (out.ill_conditioned)
        return out;
    const double dlog = measured_N.log_value - out.N_ref.log_value;
    out.dL_linear = std::expm1(dlog) / out.dlogN_dL;
    out.dL = measured_N.positive() ? dlog / out.dlogN_dL : out.dL_linear;
    return out;
}

} // namespace harvest

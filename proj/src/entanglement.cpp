#include "harvest/entanglement.hpp"
#include "harvest/errors.hpp"
#include "harvest/residues.hpp"
#include "harvest/saddle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace harvest {

namespace {

using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

Mat4 density(const TwoDetectorState& st)
{
    const cplx x = st.X.value();
    Mat4 r = Mat4::Zero();
    r(0, 0) = 1 - 2 * st.A - st.C;
    r(1, 1) = st.A;
    r(2, 2) = st.A;
    r(3, 3) = st.C;
    r(1, 2) = st.B;
    r(2, 1) = std::conj(st.B);
    r(0, 3) = -x;
    r(3, 0) = -std::conj(x);
    return r;
}

// index = 2 * first + second
Mat4 partial_transpose_second(const Mat4& r)
{
    Mat4 t;
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int j2 = 0; j2 < 2; ++j2)
                    t(2 * i1 + i2, 2 * j1 + j2) = r(2 * i1 + j2, 2 * j1 + i2);
    return t;
}

double safe_log(double v) { return v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity(); }

} // namespace

std::string_view to_string(Method m) { return m == Method::Saddle ? "saddle" : "quadrature"; }

Method parse_method(std::string_view name)
{
    if (name == "saddle")
        return Method::Saddle;
    if (name == "quadrature")
        return Method::Quadrature;
    throw PreconditionError("unknown method '" + std::string(name) + "' (saddle|quadrature)");
}

Assembly assemble(const DetectorConfig& cfg, Method m, const QuadratureSettings& s)
{
    validate_for_amplitudes(cfg);
    Assembly out;
    if (m == Method::Saddle) {
        out.a = a_saddle(cfg);
        const ScaledAmplitude x = x_saddle(cfg);
        out.x_free = x.value;
        out.x_method = x.method;
    } else {
        out.a = a_shifted(cfg, s);
        const ScaledAmplitude x = x_shifted_residue_free(cfg, s);
        out.x_free = x.value;
        out.x_method = x.method;
    }
    out.a_method = out.a.method;
    if (cfg.scenario == Scenario::AntiParallelAccel) {
        const ScaledAmplitude r = residue_contribution(cfg, s);
        out.x_residue = r.value;
        out.x_method += " + " + r.method;
    }
    out.state.A = out.a.v().real();
    out.state.X = out.x_free + out.x_residue;
    out.state.scale = Scale::Scaled;
    return out;
}

WideReal negativity(const TwoDetectorState& st)
{
    WideReal n;
    const double lx = st.X.log_abs();
    const double la = safe_log(st.A);
    if (!(lx > la))
        return n;
    n.log_value = lx + std::log1p(-std::exp(la - lx));
    return n;
}

bool corner_psd(const TwoDetectorState& st) { return st.C * (1 - 2 * st.A - st.C) >= std::norm(st.B); }

void check_raw(const TwoDetectorState& st)
{
    if (st.scale != Scale::Raw)
        throw PreconditionError("state must be in Raw scale (convert with explicit eta0, sigma*Omega first)");
    const double d = 1 - 2 * st.A - st.C;
    if (!(st.A >= 0 && st.C >= 0 && d >= 0 && d <= 1)) {
        std::ostringstream os;
        os << "not a density matrix: A=" << st.A << " C=" << st.C << " 1-2A-C=" << d;
        throw PreconditionError(os.str());
    }
    if (!std::isfinite(std::abs(st.X.value())) || !std::isfinite(std::abs(st.B)))
        throw PreconditionError("state entries must be finite");
}

double pt_oracle(const TwoDetectorState& st)
{
    check_raw(st);
    const Eigen::SelfAdjointEigenSolver<Mat4> es(partial_transpose_second(density(st)), Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (int i = 0; i < 4; ++i)
        neg += std::max(0.0, -es.eigenvalues()(i));
    return neg;
}

std::pair<double, double> correlators(const TwoDetectorState& st)
{
    const double rx = st.X.value().real(), rb = st.B.real();
    return {-2 * rx + 2 * rb, 2 * rx + 2 * rb};
}

TwoDetectorState to_raw(const TwoDetectorState& st, double eta0, double sigma_omega, bool force)
{
    if (st.scale == Scale::Raw)
        return st;
    if (!(eta0 > 0))
        throw PreconditionError("eta0 must be > 0");
    if (sigma_omega > 30 && !force) {
        std::ostringstream os;
        os << "sigma*Omega = " << sigma_omega << " > 30: raw amplitudes underflow; pass force to convert anyway";
        throw PreconditionError(os.str());
    }
    const double lf = 2 * std::log(eta0) - sigma_omega * sigma_omega;
    const double f = std::exp(lf);
    TwoDetectorState r = st;
    r.A = st.A * f;
    r.B = st.B * f;
    r.C = st.C * f;
    r.X = WideComplex(st.X.mantissa, st.X.log_scale + lf);
    r.scale = Scale::Raw;
    return r;
}

TwoDetectorState rescaled_for_sampling(const TwoDetectorState& st, double peak)
{
    const double top = std::max({safe_log(st.A), st.X.log_abs(), safe_log(std::abs(st.B)), safe_log(st.C)});
    if (!std::isfinite(top))
        throw PreconditionError("cannot rescale an all-zero state");
    const double lf = std::log(peak) - top;
    TwoDetectorState r = st;
    r.A = std::exp(safe_log(st.A) + lf);
    r.B = st.B == 0.0 ? cplx(0.0) : std::polar(std::exp(std::log(std::abs(st.B)) + lf), std::arg(st.B));
    r.C = std::exp(safe_log(st.C) + lf);
    r.X = WideComplex(st.X.mantissa, st.X.log_scale + lf);
    r.scale = Scale::Raw;
    return r;
}

std::array<double, 4> outcome_probabilities(const TwoDetectorState& st, Basis b)
{
    check_raw(st);
    const double h = 1 / std::sqrt(2.0);
    const cplx up = b == Basis::XX ? cplx(h) : cplx(0.0, h);
    // eigenvectors of sx (or sy) with eigenvalue +1 and -1
    const std::array<Eigen::Vector2cd, 2> e{Eigen::Vector2cd(h, up), Eigen::Vector2cd(h, -up)};
    const Mat4 r = density(st);
    std::array<double, 4> p{};
    double tot = 0.0;
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) {
            Vec4 v;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    v(2 * i + j) = e[s1](i) * e[s2](j);
            const double q = (v.adjoint() * r * v)(0, 0).real();
            if (q < -1e-12)
                throw PreconditionError("negative outcome probability: state is not positive");
            p[2 * s1 + s2] = std::max(q, 0.0);
            tot += p[2 * s1 + s2];
        }
    for (double& q : p)
        q /= tot;
    return p;
}

double MeasurementRecord::correlator() const
{
    if (shots == 0)
        return 0.0;
    const double same = static_cast<double>(counts[0] + counts[3]);
    const double diff = static_cast<double>(counts[1] + counts[2]);
    return (same - diff) / static_cast<double>(shots);
}

double MeasurementRecord::std_error() const
{
    if (shots == 0)
        return 0.0;
    const double c = correlator();
    return std::sqrt(std::max(0.0, 1 - c * c) / static_cast<double>(shots));
}

MeasurementRecord sample_measurements(const TwoDetectorState& st, Basis b, std::uint64_t shots, std::uint64_t seed)
{
    const std::array<double, 4> p = outcome_probabilities(st, b);
    MeasurementRecord rec;
    rec.basis = b;
    rec.shots = shots;
    rec.seed = seed;
    std::mt19937_64 gen(seed);
    // multinomial as a chain of binomials
    std::uint64_t left = shots;
    double mass = 1.0;
    for (int k = 0; k < 3; ++k) {
        const double q = mass > 0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> bin(left, q);
        rec.counts[k] = left > 0 ? bin(gen) : 0;
        left -= rec.counts[k];
        mass -= p[k];
    }
    rec.counts[3] = left;
    return rec;
}

} // namespace harvest

#include "harvest/integrate.hpp"
#include "harvest/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace harvest {

namespace {

// QUADPACK qk21 abscissae and weights
constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525159902, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr int nodes_per_rule = 21;

struct Piece {
    double a, b;
    cplx value;
    double error;
    double abs_mass;
};

double node(double a, double b, int j)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    if (j < 10)
        return c - h * xgk[j];
    if (j == 10)
        return c;
    return c + h * xgk[20 - j];
}

Piece apply_rule(double a, double b, const cplx* fv)
{
    const double h = 0.5 * (b - a);
    cplx rk = fv[10] * wgk[10];
    cplx rg = 0.0;
    double mass = std::abs(fv[10]) * wgk[10];
    for (int j = 0; j < 10; ++j) {
        const cplx s = fv[j] + fv[20 - j];
        rk += wgk[j] * s;
        mass += wgk[j] * (std::abs(fv[j]) + std::abs(fv[20 - j]));
        if (j % 2 == 1)
            rg += wg[j / 2] * s;
    }
    Piece p{a, b, rk * h, 0.0, mass * std::abs(h)};
    double err = std::abs((rk - rg) * h);
    // QUADPACK error scaling
    const cplx mean = rk * 0.5;
    double asc = std::abs(fv[10] - mean) * wgk[10];
    for (int j = 0; j < 10; ++j)
        asc += wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[20 - j] - mean));
    asc *= std::abs(h);
    if (asc != 0.0 && err != 0.0)
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (p.abs_mass > std::numeric_limits<double>::min() / (50 * eps))
        err = std::max(err, 50 * eps * p.abs_mass);
    p.error = err;
    return p;
}

// Evaluates the rule on every interval in `iv`; node values for interval k
// land in slots [21k, 21k+21).
std::vector<Piece> evaluate(const Integrand& f, const std::vector<std::pair<double, double>>& iv, bool parallel)
{
    const int n = static_cast<int>(iv.size()) * nodes_per_rule;
    std::vector<cplx> fv(n);
    std::vector<std::string> failures(parallel ? n : 0);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < n; ++i) {
            const auto& [a, b] = iv[i / nodes_per_rule];
            try {
                fv[i] = f(node(a, b, i % nodes_per_rule));
            } catch (const std::exception& e) {
                failures[i] = e.what();
                fv[i] = std::numeric_limits<double>::quiet_NaN();
            }
        }
        for (int i = 0; i < n; ++i)
            if (!failures[i].empty())
                throw ConvergenceError("integrand failed: " + failures[i]);
    } else {
        for (int i = 0; i < n; ++i) {
            const auto& [a, b] = iv[i / nodes_per_rule];
            fv[i] = f(node(a, b, i % nodes_per_rule));
        }
    }
    std::vector<Piece> out;
    out.reserve(iv.size());
    for (std::size_t k = 0; k < iv.size(); ++k)
        out.push_back(apply_rule(iv[k].first, iv[k].second, fv.data() + k * nodes_per_rule));
    return out;
}

struct ByError {
    bool operator()(const Piece& p, const Piece& q) const
    {
        if (p.error != q.error)
            return p.error < q.error;
        return p.a > q.a;
    }
};

} // namespace

IntegrationResult integrate(const Integrand& f, std::vector<double> points, const IntegrationOptions& opt)
{
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    IntegrationResult res;
    if (points.size() < 2)
        return res;

    std::vector<std::pair<double, double>> iv;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        iv.emplace_back(points[i], points[i + 1]);

    std::priority_queue<Piece, std::vector<Piece>, ByError> heap;
    for (auto& p : evaluate(f, iv, opt.parallel))
        heap.push(p);
    res.evaluations = static_cast<long>(iv.size()) * nodes_per_rule;

    auto totals = [&](cplx& v, double& e, double& m) {
        // heap order is not left-to-right; sum in a fixed order anyway
        std::vector<Piece> all;
        auto copy = heap;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Piece& p, const Piece& q) { return p.a < q.a; });
        v = 0.0;
        e = 0.0;
        m = 0.0;
        for (const auto& p : all) {
            v += p.value;
            e += p.error;
            m += p.abs_mass;
        }
    };

    cplx value;
    double error, mass;
    totals(value, error, mass);
    int intervals = static_cast<int>(heap.size());
    const double eps = std::numeric_limits<double>::epsilon();

    while (true) {
        // pieces carry a 50 eps |f| roundoff floor each; stop at twice that
        const double tol = std::max({opt.abs_tol, opt.rel_tol * std::abs(value), 100 * eps * mass});
        if (error <= tol)
            break;
        if (intervals >= opt.max_subdivisions) {
            res.converged = false;
            break;
        }
        // Bisect up to four of the worst intervals per pass so the parallel
        // path has more than 21 nodes to spread over threads.
        const int batch = std::min<int>(4, static_cast<int>(heap.size()));
        std::vector<std::pair<double, double>> halves;
        bool stuck = false;
        for (int k = 0; k < batch; ++k) {
            Piece worst = heap.top();
            if (k > 0 && worst.error < 0.25 * error / intervals)
                break;
            heap.pop();
            const double mid = 0.5 * (worst.a + worst.b);
            if (!(mid > worst.a && mid < worst.b)) {
                heap.push(worst);
                stuck = true;
                break;
            }
            halves.emplace_back(worst.a, mid);
            halves.emplace_back(mid, worst.b);
        }
        if (halves.empty()) {
            res.converged = !stuck ? res.converged : false;
            break;
        }
        for (auto& p : evaluate(f, halves, opt.parallel))
            heap.push(p);
        res.evaluations += static_cast<long>(halves.size()) * nodes_per_rule;
        intervals = static_cast<int>(heap.size());
        totals(value, error, mass);
        if (stuck) {
            res.converged = false;
            break;
        }
    }

    res.value = value;
    res.error = error;
    res.abs_mass = mass;
    res.intervals = intervals;
    if (!res.converged && !opt.allow_unconverged) {
        std::ostringstream os;
        os << "adaptive quadrature did not converge: estimate " << value << " error " << error
           << " after " << intervals << " intervals";
        throw ConvergenceError(os.str());
    }
    return res;
}

IntegrationResult integrate(const Integrand& f, double a, double b, const IntegrationOptions& opt)
{
    if (a == b)
        return {};
    if (a > b) {
        IntegrationResult r = integrate(f, std::vector<double>{b, a}, opt);
        r.value = -r.value;
        return r;
    }
    return integrate(f, std::vector<double>{a, b}, opt);
}

} // namespace harvest

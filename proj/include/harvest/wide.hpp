#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace harvest {

using cplx = std::complex<double>;

// mantissa * exp(log_scale). Residue terms at small g reach exp(1e5) and more,
// so they are carried with a separate exponent.
struct WideComplex {
    cplx mantissa{0.0, 0.0};
    double log_scale = 0.0;

    WideComplex() = default;
    WideComplex(cplx m, double s = 0.0) : mantissa(m), log_scale(s) {}

    bool is_zero() const { return mantissa == cplx(0.0, 0.0); }

    // Moves the magnitude of the mantissa into log_scale.
    WideComplex normalized() const {
        double m = std::abs(mantissa);
        if (m == 0.0 || !std::isfinite(m))
            return *this;
        double l = std::log(m);
        return WideComplex(mantissa / m, log_scale + l);
    }

    // May overflow to inf or underflow to 0.
    cplx value() const {
        if (is_zero())
            return {0.0, 0.0};
        WideComplex n = normalized();
        double r = std::exp(n.log_scale);
        return n.mantissa * r;
    }

    double log_abs() const {
        if (is_zero())
            return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(mantissa)) + log_scale;
    }

    double abs() const { return std::exp(log_abs()); }

    friend WideComplex operator+(const WideComplex& p, const WideComplex& q) {
        if (p.is_zero())
            return q;
        if (q.is_zero())
            return p;
        WideComplex u = p.normalized(), v = q.normalized();
        if (u.log_scale < v.log_scale)
            std::swap(u, v);
        return WideComplex(u.mantissa + v.mantissa * std::exp(v.log_scale - u.log_scale), u.log_scale);
    }

    friend WideComplex operator-(const WideComplex& p) { return WideComplex(-p.mantissa, p.log_scale); }
    friend WideComplex operator-(const WideComplex& p, const WideComplex& q) { return p + (-q); }

    friend WideComplex operator*(const WideComplex& p, double s) {
        return WideComplex(p.mantissa * s, p.log_scale);
    }
};

// Positive real with an exponent; used for negativities that overflow double.
struct WideReal {
    double log_value = -std::numeric_limits<double>::infinity(); // log of value, -inf for 0

    static WideReal from(double v) {
        WideReal r;
        if (v > 0.0)
            r.log_value = std::log(v);
        return r;
    }
    bool positive() const { return log_value > -std::numeric_limits<double>::infinity(); }
    double value() const { return std::exp(log_value); }
};

} // namespace harvest

#include "output.hpp"
#include "harvest/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace harvest::cli {

std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string wide_log10(double natural_log)
{
    if (std::isinf(natural_log) && natural_log < 0)
        return "0";
    if (!std::isfinite(natural_log))
        return "nan";
    const double l10 = natural_log / std::log(10.0);
    if (std::abs(l10) < 300)
        return num(std::exp(natural_log));
    double e = std::floor(l10);
    double m = std::pow(10.0, l10 - e);
    if (m >= 9.9999995) {
        m = 1.0;
        e += 1;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7fe%+.0f", m, e);
    return buf;
}

std::string wide_signed(double natural_log, double sign)
{
    const std::string m = wide_log10(natural_log);
    return sign < 0 && m != "0" ? "-" + m : m;
}

std::string wide_part(const WideComplex& z, bool imag)
{
    if (z.is_zero())
        return "0";
    const WideComplex n = z.normalized();
    const double c = imag ? n.mantissa.imag() : n.mantissa.real();
    if (c == 0.0)
        return "0";
    if (n.log_scale < 700)
        return num(c * std::exp(n.log_scale));
    return wide_signed(n.log_scale + std::log(std::abs(c)), c);
}

nlohmann::json jnum(double v)
{
    if (std::isfinite(v))
        return v;
    return num(v);
}

std::string wide(const WideReal& v) { return wide_log10(v.log_value); }

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {}

void Csv::row(const std::vector<std::string>& cells)
{
    if (cells.size() != header_.size())
        throw std::logic_error("csv row width does not match header");
    rows_.push_back(cells);
}

void Csv::write(std::ostream& os) const
{
    auto line = [&](const std::vector<std::string>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                os << ',';
            os << v[i];
        }
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_)
        line(r);
}

nlohmann::json Csv::to_json() const
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows_) {
        nlohmann::json o = nlohmann::json::object();
        for (std::size_t i = 0; i < header_.size(); ++i) {
            double v = 0.0;
            const char* b = r[i].data();
            auto [p, ec] = std::from_chars(b, b + r[i].size(), v);
            if (ec == std::errc() && p == b + r[i].size() && std::isfinite(v))
                o[header_[i]] = v;
            else
                o[header_[i]] = r[i];
        }
        out.push_back(o);
    }
    return out;
}

nlohmann::json manifest(const RunOptions& o, const QuadratureSettings& q)
{
    nlohmann::json m;
    m["tool"] = "harvest";
    m["version"] = tool_version;
    m["command"] = o.command;
    m["format"] = o.format;
    m["method"] = o.method;
    m["threads"] = o.threads;
    m["seed"] = o.seed;
    m["config"] = o.config.values();
    m["quadrature"] = {{"rel_tol", q.rel_tol},
                       {"abs_tol", q.abs_tol},
                       {"truncation_radius", q.truncation_radius},
                       {"max_subdivisions", q.max_subdivisions},
                       {"epsilon_ladder", q.epsilon_ladder}};
    return m;
}

void emit(const RunOptions& o, const std::string& payload, nlohmann::json man, double wall_seconds)
{
    if (o.timing)
        man["wall_time_s"] = wall_seconds;
    if (o.out.empty() || o.out == "-") {
        std::cout << payload;
        std::cout.flush();
        std::cerr << man.dump(2) << '\n';
        return;
    }
    const std::string side = o.out + ".manifest.json";
    man["output"] = o.out;
    {
        std::ofstream f(o.out, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write '" + o.out + "'");
        f << payload;
        if (!f)
            throw std::runtime_error("write failed for '" + o.out + "'");
    }
    std::ofstream f(side, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write '" + side + "'");
    f << man.dump(2) << '\n';
}

} // namespace harvest::cli

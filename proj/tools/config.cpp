#include "config.hpp"
#include "harvest/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace harvest::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string json_scalar(const nlohmann::json& v, const std::string& key)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer() || v.is_number_unsigned())
        return v.dump();
    if (v.is_number_float()) {
        char buf[32];
        auto r = std::to_chars(buf, buf + sizeof buf, v.get<double>());
        return std::string(buf, r.ptr);
    }
    if (v.is_array()) {
        std::string out;
        for (const auto& e : v) {
            if (!out.empty())
                out += ',';
            out += json_scalar(e, key);
        }
        return out;
    }
    throw PreconditionError("config key '" + key + "': nested objects are not supported");
}

} // namespace

const std::set<std::string> detector_keys{"scenario", "kappa", "sigma", "omega", "L", "eta0", "a", "w", "g"};
const std::set<std::string> quadrature_keys{"rel_tol", "abs_tol", "truncation_radius", "max_subdivisions"};

double parse_double(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    double v = 0.0;
    const char* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || p != end)
        throw PreconditionError(what + ": '" + text + "' is not a number");
    return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const char* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || p != end)
        throw PreconditionError(what + ": '" + text + "' is not an unsigned integer");
    return v;
}

Config Config::parse(const std::string& text, const std::string& origin)
{
    Config c;
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
        } catch (const nlohmann::json::exception& e) {
            throw PreconditionError(origin + ": " + e.what());
        }
        for (const auto& [k, v] : j.items())
            c.set(k, json_scalar(v, k));
        return c;
    }
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError(origin + ":" + std::to_string(n) + ": expected key = value");
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PreconditionError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value)
{
    if (key.empty())
        throw PreconditionError("config: empty key");
    values_[key] = value;
}

void Config::set_assignment(const std::string& kv)
{
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw PreconditionError("--set expects key=value, got '" + kv + "'");
    set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const
{
    return find_double(key).value_or(fallback);
}

std::optional<double> Config::find_double(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        return std::nullopt;
    return parse_double(it->second, key);
}

long long Config::get_int(const std::string& key, long long fallback) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    const std::string t = trim(it->second);
    long long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size())
        throw PreconditionError(key + ": '" + it->second + "' is not an integer");
    return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const
{
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_u64(it->second, key);
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    if (it->second == "true" || it->second == "1")
        return true;
    if (it->second == "false" || it->second == "0")
        return false;
    throw PreconditionError(key + ": '" + it->second + "' is not a boolean");
}

std::vector<double> Config::get_list(const std::string& key) const
{
    std::vector<double> out;
    auto it = values_.find(key);
    if (it == values_.end())
        return out;
    std::string item;
    std::istringstream in(it->second);
    while (std::getline(in, item, ','))
        out.push_back(parse_double(item, key));
    return out;
}

void Config::check_keys(const std::set<std::string>& allowed, const std::string& command) const
{
    for (const auto& [k, v] : values_)
        if (!allowed.count(k))
            throw PreconditionError("unknown config key '" + k + "' for " + command);
}

DetectorConfig detector_from(const Config& c)
{
    const Scenario s = parse_scenario(c.get_string("scenario", "parallel"));
    const double sigma = c.get_double("sigma", 1.0);
    const double eta0 = c.get_double("eta0", 0.01);
    const bool dimless = c.has("a") || c.has("w") || c.has("g");
    if (dimless) {
        for (const char* k : {"kappa", "omega", "L"})
            if (c.has(k))
                throw PreconditionError(std::string("give either a, w, g or kappa, omega, L (both sets contain '") + k +
                                        "')");
        for (const char* k : {"a", "w", "g"})
            if (!c.has(k))
                throw PreconditionError(std::string("missing key '") + k + "'");
        return config_from_point(s, c.get_double("a", 0), c.get_double("w", 0), c.get_double("g", 0), sigma, eta0);
    }
    DetectorConfig d;
    d.scenario = s;
    d.sigma = sigma;
    d.eta0 = eta0;
    d.kappa = c.get_double("kappa", s == Scenario::Inertial ? 0.0 : 1.0);
    d.omega = c.get_double("omega", 1.0);
    d.L = c.get_double("L", 1.0);
    return d;
}

QuadratureSettings quadrature_from(const Config& c)
{
    QuadratureSettings q;
    q.rel_tol = c.get_double("rel_tol", q.rel_tol);
    q.abs_tol = c.get_double("abs_tol", q.abs_tol);
    q.truncation_radius = c.get_double("truncation_radius", q.truncation_radius);
    q.max_subdivisions = static_cast<int>(c.get_int("max_subdivisions", q.max_subdivisions));
    if (!(q.rel_tol > 0 && q.rel_tol < 1))
        throw PreconditionError("rel_tol must be in (0, 1)");
    if (!(q.abs_tol >= 0))
        throw PreconditionError("abs_tol must be >= 0");
    if (!(q.truncation_radius > 0))
        throw PreconditionError("truncation_radius must be > 0");
    if (q.max_subdivisions < 1)
        throw PreconditionError("max_subdivisions must be >= 1");
    return q;
}

} // namespace harvest::cli

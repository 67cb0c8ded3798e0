#pragma once

#include "harvest/core.hpp"
#include "harvest/quadrature.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace harvest::cli {

// Flat key -> text. Values keep their spelling so the manifest echoes what
// was asked for.
class Config {
public:
    // "key = value" lines ('#' comments) or a flat JSON object.
    static Config parse(const std::string& text, const std::string& origin = "config");
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    // "key=value"
    void set_assignment(const std::string& kv);
    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::optional<double> find_double(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;

    // Throws PreconditionError naming the first key not in `allowed`.
    void check_keys(const std::set<std::string>& allowed, const std::string& command) const;

private:
    std::map<std::string, std::string> values_;
};

double parse_double(const std::string& text, const std::string& what);
std::uint64_t parse_u64(const std::string& text, const std::string& what);

// Detector keys: scenario, kappa, sigma, omega, L, eta0; or a, w, g (with
// sigma) instead of kappa/omega/L.
extern const std::set<std::string> detector_keys;
extern const std::set<std::string> quadrature_keys;

DetectorConfig detector_from(const Config& c);
QuadratureSettings quadrature_from(const Config& c);

} // namespace harvest::cli

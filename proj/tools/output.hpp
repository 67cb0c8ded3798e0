#pragma once

#include "config.hpp"
#include "harvest/wide.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace harvest::cli {

inline constexpr const char* tool_version = "0.1.0";

// Shortest round-trip decimal, locale independent. nan/inf spelled out.
std::string num(double v);
// Decimal with a free exponent: "3.2e+482993". "0" for zero.
std::string wide(const WideReal& v);
std::string wide_log10(double natural_log);
// sign * exp(natural_log) in the same notation
std::string wide_signed(double natural_log, double sign);
// real or imaginary part of z, wide notation when it overflows double
std::string wide_part(const WideComplex& z, bool imag);
// number when finite, else the num() spelling
nlohmann::json jnum(double v);

// Plain CSV, numeric payload plus a few bare-word columns.
class Csv {
public:
    explicit Csv(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    void write(std::ostream& os) const;
    std::size_t rows() const { return rows_.size(); }
    // Array of objects keyed by the header; numeric cells become numbers.
    nlohmann::json to_json() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct RunOptions {
    std::string command;
    std::string out;      // empty: stdout
    std::string format = "csv";
    std::string method; // empty: per-command default
    int threads = 0;
    std::uint64_t seed = 0;
    bool timing = false;
    Config config;
};

// Settings snapshot; everything needed to re-run.
nlohmann::json manifest(const RunOptions& o, const QuadratureSettings& q);

// Writes the payload to o.out (or stdout) and the manifest next to it as
// <out>.manifest.json (or to stderr when writing to stdout).
void emit(const RunOptions& o, const std::string& payload, nlohmann::json man, double wall_seconds);

} // namespace harvest::cli

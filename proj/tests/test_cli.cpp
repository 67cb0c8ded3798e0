#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"
#include "harvest/errors.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace harvest;
using namespace harvest::cli;
using doctest::Approx;

namespace {
std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
} // namespace

TEST_CASE("key=value config")
{
    const Config c = Config::parse("# comment\nscenario = antiparallel\n a=2.5 # trailing\n\nw=1.2\ng = 0.001\n");
    CHECK(c.get_string("scenario", "") == "antiparallel");
    CHECK(c.get_double("a", 0) == 2.5);
    CHECK(c.get_double("w", 0) == 1.2);
    CHECK(c.get_double("missing", 7) == 7);
    CHECK_FALSE(c.find_double("missing"));
    const DetectorConfig d = detector_from(c);
    CHECK(d.scenario == Scenario::AntiParallelAccel);
    CHECK(d.kappa * d.L == Approx(2.5));
    CHECK(d.kappa * d.sigma == Approx(0.001));
}

TEST_CASE("json config")
{
    const Config c = Config::parse(R"({"scenario": "parallel", "kappa": 0.5, "sigma": 1, "omega": 1.5, "L": 3,
                                       "dL_frac": [-0.1, 0.2], "shots": 1000})");
    CHECK(c.get_double("kappa", 0) == 0.5);
    CHECK(c.get_u64("shots", 0) == 1000);
    const auto l = c.get_list("dL_frac");
    REQUIRE(l.size() == 2);
    CHECK(l[0] == -0.1);
    CHECK(l[1] == 0.2);
    const DetectorConfig d = detector_from(c);
    CHECK(d.omega == 1.5);
    CHECK(d.L == 3);
    CHECK_THROWS_AS(Config::parse("{\"a\": "), PreconditionError);
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(Config::parse("a 2.5"), PreconditionError);
    CHECK_THROWS_AS(parse_double("2.5x", "a"), PreconditionError);
    CHECK_THROWS_AS(parse_double("", "a"), PreconditionError);
    CHECK_THROWS_AS(parse_u64("-3", "seed"), PreconditionError);
    CHECK(parse_u64("18446744073709551615", "seed") == 18446744073709551615ull);
    Config c;
    c.set_assignment("a=1");
    c.set_assignment("bogus=1");
    CHECK_THROWS_AS(c.check_keys(detector_keys, "compute"), PreconditionError);
    CHECK_THROWS_AS(c.set_assignment("novalue"), PreconditionError);
    // mixed parameter sets
    Config m = Config::parse("scenario=parallel\na=1\nw=1\ng=0.1\nkappa=1");
    CHECK_THROWS_AS(detector_from(m), PreconditionError);
    Config q = Config::parse("rel_tol=-1");
    CHECK_THROWS_AS(quadrature_from(q), PreconditionError);
}

TEST_CASE("number formatting")
{
    CHECK(num(0.1) == "0.1");
    CHECK(num(-2.5e-300) == "-2.5e-300");
    CHECK(num(std::nan("")) == "nan");
    CHECK(num(-INFINITY) == "-inf");
    CHECK(wide_log10(-INFINITY) == "0");
    CHECK(wide_log10(std::log(2.0)) == "2");
    CHECK(wide_log10(1e6).rfind("e+434294") != std::string::npos);
    CHECK(wide_signed(1e6, -1).front() == '-');
    WideReal z;
    CHECK(wide(z) == "0");
    CHECK(wide_part(WideComplex(cplx(0.0, 2.0), 0.0), true) == "2");
    CHECK(wide_part(WideComplex(cplx(0.0, 2.0), 0.0), false) == "0");
}

TEST_CASE("csv")
{
    Csv t({"a", "name", "v"});
    t.row({"1", "x", "nan"});
    t.row({"2.5", "y", "-3e-4"});
    CHECK_THROWS(t.row({"1"}));
    std::ostringstream os;
    t.write(os);
    CHECK(os.str() == "a,name,v\n1,x,nan\n2.5,y,-3e-4\n");
    const auto j = t.to_json();
    REQUIRE(j.size() == 2);
    CHECK(j[1]["a"].get<double>() == 2.5);
    CHECK(j[0]["name"] == "x");
    CHECK(j[1]["v"].get<double>() == -3e-4);
}

TEST_CASE("resonance command writes csv and manifest")
{
    const auto dir = std::filesystem::temp_directory_path() / "harvest_cli_test";
    std::filesystem::create_directories(dir);
    RunOptions o;
    o.command = "resonance";
    o.out = (dir / "res.csv").string();
    o.seed = 5;
    o.config = Config::parse("kappa=0.001\nsigma=1\nw_n=4\nw_max=3");
    CHECK(cmd_resonance(o) == 0);
    const std::string csv = slurp(o.out);
    CHECK(csv.rfind("w,a_crit,L_crit,omega\n", 0) == 0);
    const auto man = nlohmann::json::parse(slurp(o.out + ".manifest.json"));
    CHECK(man["command"] == "resonance");
    CHECK(man["seed"] == 5);
    CHECK(man["version"] == tool_version);
    CHECK_FALSE(man.contains("wall_time_s"));

    // same inputs, same bytes
    const std::string first = csv, first_man = slurp(o.out + ".manifest.json");
    CHECK(cmd_resonance(o) == 0);
    CHECK(slurp(o.out) == first);
    CHECK(slurp(o.out + ".manifest.json") == first_man);
    std::filesystem::remove_all(dir);
}

TEST_CASE("compute rejects out of range points")
{
    RunOptions o;
    o.command = "compute";
    o.format = "json";
    o.config = Config::parse("scenario=parallel\na=1\nw=3.2\ng=0.001");
    CHECK_THROWS_AS(cmd_compute(o), PreconditionError);
}

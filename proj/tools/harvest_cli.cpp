#include "commands.hpp"
#include "oracle_suites.hpp"
#include "harvest/errors.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>

using namespace harvest;

int main(int argc, char** argv)
{
    CLI::App app{"Entanglement harvesting by accelerated detector pairs"};
    app.require_subcommand(1);
    app.fallthrough();

    cli::RunOptions opt;
    std::string config_path, format, scenario, suite = "all";
    std::vector<std::string> sets;

    app.add_option("--config", config_path, "key=value or JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", opt.out, "output path (default stdout; manifest goes next to it)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--method", opt.method, "saddle or quadrature (scan defaults to saddle)")->check(CLI::IsMember({"saddle", "quadrature"}));
    app.add_option("--threads", opt.threads, "worker cap, 0 = OpenMP default")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", opt.seed, "seed for sampling");
    app.add_option("--set", sets, "override one config key, key=value");
    app.add_option("--scenario", scenario, "shortcut for --set scenario=...");
    app.add_flag("--timing", opt.timing, "record wall time in the manifest");

    auto* compute = app.add_subcommand("compute", "A, X, N at one point");
    auto* scan = app.add_subcommand("scan", "negativity on an (a, w) grid");
    auto* resonance = app.add_subcommand("resonance", "critical distance a_crit(w)");
    auto* corridor = app.add_subcommand("corridor", "Re X around the critical distance");
    auto* rangefind = app.add_subcommand("rangefind", "corridor, sudden_death or gradient protocol");
    auto* oracle = app.add_subcommand("oracle", "comparison suites, exit 0 iff all pass");
    oracle->add_option("--suite", suite, "assembly|saddle|amplitude|contour|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty())
            opt.config = cli::Config::load(config_path);
        if (!scenario.empty())
            opt.config.set("scenario", scenario);
        for (const auto& s : sets)
            opt.config.set_assignment(s);
        if (opt.threads > 0)
            omp_set_num_threads(opt.threads);

        auto* sub = app.get_subcommands().front();
        opt.command = sub->get_name();
        opt.format = format.empty() ? (sub == compute ? "json" : "csv") : format;
        if (opt.method.empty())
            opt.method = sub == scan ? "saddle" : "quadrature";
        if (sub == compute)
            return cli::cmd_compute(opt);
        if (sub == scan)
            return cli::cmd_scan(opt);
        if (sub == resonance)
            return cli::cmd_resonance(opt);
        if (sub == corridor)
            return cli::cmd_corridor(opt);
        if (sub == rangefind)
            return cli::cmd_rangefind(opt);
        if (sub == oracle)
            return cli::cmd_oracle(opt, suite);
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

#include "commands.hpp"
#include "oracle_suites.hpp"
#include "harvest/entanglement.hpp"
#include "harvest/errors.hpp"
#include "harvest/residues.hpp"
#include "harvest/saddle.hpp"
#include "harvest/scan.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace harvest::cli {

namespace {

using nlohmann::json;
using clock_type = std::chrono::steady_clock;

std::set<std::string> keys(std::initializer_list<const std::set<std::string>*> sets, std::set<std::string> extra = {})
{
    for (const auto* s : sets)
        extra.insert(s->begin(), s->end());
    return extra;
}

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void check_format(const RunOptions& o)
{
    if (o.format != "csv" && o.format != "json")
        throw PreconditionError("--format must be csv or json");
}

json wide_json(const WideComplex& z)
{
    auto part = [&](bool imag) -> json {
        const std::string t = wide_part(z, imag);
        return t.find('e') != std::string::npos && z.log_abs() >= 700 ? json(t) : json(parse_double(t, "part"));
    };
    return {{"re", part(false)},
            {"im", part(true)},
            {"log_abs", jnum(z.log_abs())},
            {"arg", z.is_zero() ? 0.0 : std::arg(z.normalized().mantissa)}};
}

json wide_json(const WideReal& v)
{
    return v.log_value < 700 ? json(v.value()) : json(wide(v));
}

std::string csv_text(const Csv& c)
{
    std::ostringstream os;
    c.write(os);
    return os.str();
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

std::string table(const RunOptions& o, const Csv& c) { return o.format == "csv" ? csv_text(c) : json_text(c.to_json()); }

} // namespace

int cmd_compute(const RunOptions& o)
{
    const auto t0 = clock_type::now();
    check_format(o);
    o.config.check_keys(keys({&detector_keys, &quadrature_keys}), "compute");
    const DetectorConfig cfg = detector_from(o.config);
    QuadratureSettings q = quadrature_from(o.config);
    q.parallel = o.threads != 1;
    validate_for_amplitudes(cfg);
    const Method m = parse_method(o.method);
    const Assembly as = assemble(cfg, m, q);
    const WideReal N = negativity(as.state);
    const DimensionlessPoint p = cfg.scenario == Scenario::Inertial ? DimensionlessPoint{} : reduce(cfg);

    json crit = nullptr;
    try {
        const CriterionResult cr = criterion(cfg);
        crit = {{"entangled", cr.entangled}, {"lhs", jnum(cr.lhs)}, {"rhs", jnum(cr.rhs)}, {"margin", jnum(cr.margin)}};
    } catch (const UnsupportedClosedForm&) {
    }
    json residue_diag = nullptr;
    if (cfg.scenario == Scenario::AntiParallelAccel) {
        ResidueDiagnostics d;
        residue_contribution(cfg, q, &d);
        residue_diag = {{"path", d.path}, {"log_scale", jnum(d.log_scale)}};
        if (d.sd_available)
            residue_diag["steepest_descent_relative_difference"] = jnum(d.sd_relative_difference);
    }

    std::string payload;
    if (o.format == "json") {
        json r;
        r["scenario"] = std::string(to_string(cfg.scenario));
        r["parameters"] = {{"kappa", jnum(cfg.kappa)}, {"sigma", jnum(cfg.sigma)}, {"omega", jnum(cfg.omega)},
                           {"L", jnum(cfg.L)},         {"eta0", jnum(cfg.eta0)}};
        r["point"] = {{"a", jnum(p.a)}, {"w", jnum(p.w)}, {"g", jnum(p.g)}, {"b", jnum(p.b)}};
        r["A_scaled"] = {{"value", jnum(as.state.A)}, {"method", as.a_method}};
        r["X_scaled"] = wide_json(as.state.X);
        r["X_scaled"]["method"] = as.x_method;
        r["X_scaled"]["parts"] = {{"residue_free", wide_json(as.x_free)}, {"residue", wide_json(as.x_residue)}};
        r["N_scaled"] = {{"value", wide_json(N)}, {"log", jnum(N.log_value)}};
        r["entangled"] = N.positive();
        r["criterion"] = crit;
        r["diagnostics"] = {{"spacelike_ok", cfg.spacelike_ok()}, {"residue", residue_diag}};
        payload = json_text(r);
    } else {
        Csv c({"a", "w", "g", "b", "A_scaled", "reX", "imX", "log_abs_X", "reX_residue_free", "imX_residue_free",
               "log_abs_X_residue", "N_scaled", "log_N_scaled", "entangled"});
        c.row({num(p.a), num(p.w), num(p.g), num(p.b), num(as.state.A), wide_part(as.state.X, false),
               wide_part(as.state.X, true), num(as.state.X.log_abs()), wide_part(as.x_free, false),
               wide_part(as.x_free, true), num(as.x_residue.log_abs()), wide(N),
               num(N.log_value), N.positive() ? "1" : "0"});
        payload = csv_text(c);
    }
    json man = manifest(o, q);
    man["methods"] = {{"A", as.a_method}, {"X", as.x_method}};
    emit(o, payload, man, seconds_since(t0));
    return 0;
}

int cmd_scan(const RunOptions& o)
{
    const auto t0 = clock_type::now();
    check_format(o);
    o.config.check_keys(keys({&quadrature_keys}, {"scenario", "a_min", "a_max", "a_n", "w_min", "w_max", "w_n", "g",
                                                  "sigma"}),
                        "scan");
    GridSpec s;
    s.scenario = parse_scenario(o.config.get_string("scenario", "parallel"));
    s.a_min = o.config.get_double("a_min", s.a_min);
    s.a_max = o.config.get_double("a_max", s.a_max);
    s.a_n = static_cast<int>(o.config.get_int("a_n", s.a_n));
    s.w_min = o.config.get_double("w_min", s.w_min);
    s.w_max = o.config.get_double("w_max", s.w_max);
    s.w_n = static_cast<int>(o.config.get_int("w_n", s.w_n));
    s.g = o.config.get_double("g", s.g);
    s.sigma = o.config.get_double("sigma", s.sigma);
    s.method = parse_method(o.method);
    s.quad = quadrature_from(o.config);
    s.threads = o.threads;
    const ScanGrid grid = grid_scan(s);

    int n_ent = 0, n_fail = 0, n_res = 0;
    json failures = json::array();
    for (const Cell& c : grid.cells) {
        n_ent += c.entangled;
        n_res += (c.flags & CellResonance) != 0;
        if (c.flags & CellFailed) {
            ++n_fail;
            if (failures.size() < 50)
                failures.push_back({{"a", c.a}, {"w", c.w}, {"error", c.error}});
        }
    }

    std::string payload;
    if (o.format == "csv") {
        Csv csv({"a", "w", "N_scaled", "log_N_scaled", "entangled", "A_scaled", "log_abs_X", "method", "flags"});
        for (const Cell& c : grid.cells) {
            const bool bad = c.flags & CellFailed;
            csv.row({num(c.a), num(c.w), bad ? "nan" : wide(c.N), bad ? "nan" : num(c.N.log_value),
                     c.entangled ? "1" : "0", num(c.A), num(c.log_abs_X), c.path, flags_string(c.flags)});
        }
        payload = csv_text(csv);
    } else {
        json j;
        j["a_axis"] = grid.a_axis;
        j["w_axis"] = grid.w_axis;
        json cells = json::array();
        for (const Cell& c : grid.cells)
            cells.push_back({{"a", c.a}, {"w", c.w}, {"N_scaled", wide_json(c.N)}, {"log_N_scaled", jnum(c.N.log_value)},
                             {"entangled", c.entangled}, {"A_scaled", jnum(c.A)}, {"log_abs_X", jnum(c.log_abs_X)},
                             {"method", c.path}, {"flags", flags_string(c.flags)}, {"error", c.error}});
        j["cells"] = cells;
        payload = json_text(j);
    }
    json man = manifest(o, s.quad);
    man["grid"] = {{"scenario", std::string(to_string(s.scenario))},
                   {"a_min", s.a_min}, {"a_max", s.a_max}, {"a_n", s.a_n},
                   {"w_min", s.w_min}, {"w_max", s.w_max}, {"w_n", s.w_n},
                   {"g", s.g}, {"sigma", s.sigma}};
    man["summary"] = {{"cells", grid.cells.size()}, {"entangled", n_ent}, {"resonance", n_res}, {"failed", n_fail}};
    man["failures"] = failures;
    emit(o, payload, man, seconds_since(t0));
    return 0;
}

int cmd_resonance(const RunOptions& o)
{
    const auto t0 = clock_type::now();
    check_format(o);
    o.config.check_keys({"kappa", "sigma", "w_min", "w_max", "w_n"}, "resonance");
    const double kappa = o.config.get_double("kappa", 0.001);
    const double sigma = o.config.get_double("sigma", 1.0);
    const std::vector<double> ws = open_closed_axis(o.config.get_double("w_min", 0.0),
                                                    o.config.get_double("w_max", std::numbers::pi - 0.01),
                                                    static_cast<int>(o.config.get_int("w_n", 200)));
    const auto locus = resonance_locus(ws, kappa, sigma);
    Csv c({"w", "a_crit", "L_crit", "omega"});
    for (const auto& r : locus)
        c.row({num(r.w), num(r.a_crit), num(r.L_crit), num(r.omega)});
    emit(o, table(o, c), manifest(o, {}), seconds_since(t0));
    return 0;
}

int cmd_corridor(const RunOptions& o)
{
    const auto t0 = clock_type::now();
    check_format(o);
    o.config.check_keys(keys({&quadrature_keys}, {"kappa", "sigma", "omega", "axis", "dL_max_frac", "dL_min_frac",
                                                  "n_side", "n"}),
                        "corridor");
    const double kappa = o.config.get_double("kappa", 0.001);
    const double sigma = o.config.get_double("sigma", 1.0);
    const double omega = o.config.get_double("omega", 1250.0);
    const QuadratureSettings q = quadrature_from(o.config);
    const double lc = critical_distance(kappa, sigma, omega);
    const double dmax = o.config.get_double("dL_max_frac", 0.5) * lc;
    const std::string axis = o.config.get_string("axis", "symlog");
    std::vector<double> dL;
    if (axis == "symlog")
        dL = symlog_axis(dmax, o.config.get_double("dL_min_frac", 1e-6), static_cast<int>(o.config.get_int("n_side", 25)));
    else if (axis == "linear")
        dL = linear_axis(-dmax, dmax, static_cast<int>(o.config.get_int("n", 101)));
    else
        throw PreconditionError("axis must be symlog or linear");
    const CorridorSweep sw = corridor_sweep(kappa, sigma, omega, dL, q, o.threads);

    Csv c({"deltaL", "L", "reX", "imX", "log_abs_X_residue", "ok"});
    json failures = json::array();
    for (const auto& p : sw.points) {
        c.row({num(p.dL), num(sw.L_crit + p.dL), num(p.reX), num(p.imX), num(p.residue_log_abs), p.ok ? "1" : "0"});
        if (!p.ok)
            failures.push_back({{"deltaL", p.dL}, {"error", p.error}});
    }
    const std::string payload = table(o, c);
    json man = manifest(o, q);
    man["L_crit"] = lc;
    man["failures"] = failures;
    man["sign_change_interval"] = sw.sign_change_interval
                                      ? json{sw.sign_change_interval->first, sw.sign_change_interval->second}
                                      : json(nullptr);
    emit(o, payload, man, seconds_since(t0));
    return 0;
}

int cmd_rangefind(const RunOptions& o)
{
    const auto t0 = clock_type::now();
    check_format(o);
    const std::string protocol = o.config.get_string("protocol", "corridor");
    const QuadratureSettings q = quadrature_from(o.config);
    json man = manifest(o, q);
    Csv csv({});

    if (protocol == "corridor") {
        o.config.check_keys(keys({&quadrature_keys}, {"protocol", "kappa", "sigma", "omega", "dL_frac", "shots"}),
                            "rangefind corridor");
        const double kappa = o.config.get_double("kappa", 0.001);
        const double sigma = o.config.get_double("sigma", 1.0);
        const double omega = o.config.get_double("omega", 1250.0);
        const double lc = critical_distance(kappa, sigma, omega);
        std::vector<double> fr = o.config.get_list("dL_frac");
        if (fr.empty())
            fr = {-0.3, -0.1, -1e-3, 1e-5, 1e-4, 0.1};
        std::vector<DetectorConfig> cfgs;
        for (double f : fr) {
            DetectorConfig c;
            c.scenario = Scenario::AntiParallelAccel;
            c.kappa = kappa;
            c.sigma = sigma;
            c.omega = omega;
            c.L = lc * (1 + f);
            cfgs.push_back(c);
        }
        const auto v = rangefind_corridor(cfgs, o.config.get_u64("shots", 1000000), o.seed, q);
        csv = Csv({"dL_frac", "L", "estimate", "std_error", "truth", "verdict", "seed_xx", "seed_yy"});
        for (std::size_t i = 0; i < v.size(); ++i)
            csv.row({num(fr[i]), num(v[i].L), num(v[i].estimate), num(v[i].std_error), num(v[i].truth),
                     v[i].at_critical ? "1" : "0", std::to_string(v[i].seed_xx), std::to_string(v[i].seed_yy)});
        man["L_crit"] = lc;
    } else if (protocol == "sudden_death") {
        o.config.check_keys(keys({&quadrature_keys}, {"protocol", "kappa", "sigma", "omega", "w", "delta_frac"}),
                            "rangefind sudden_death");
        const double kappa = o.config.get_double("kappa", 0.001);
        const double sigma = o.config.get_double("sigma", 1.0);
        double omega = o.config.get_double("omega", 0.0);
        if (o.config.has("w")) {
            if (o.config.has("omega"))
                throw PreconditionError("give either w or omega");
            omega = o.config.get_double("w", 0) / (kappa * sigma * sigma);
        } else if (!o.config.has("omega"))
            omega = 2.6 / (kappa * sigma * sigma);
        const double delta = o.config.get_double("delta_frac", 0.05) / kappa;
        const SuddenDeath sd = rangefind_sudden_death(kappa, sigma, omega, delta, parse_method(o.method), q);
        csv = Csv({"L_above", "L_below", "above", "below", "log_N_above", "log_N_below", "trigger"});
        csv.row({num(2 / kappa + delta), num(2 / kappa - delta), sd.above ? "1" : "0", sd.below ? "1" : "0",
                 num(sd.N_above.log_value), num(sd.N_below.log_value), sd.trigger ? "1" : "0"});
    } else if (protocol == "gradient") {
        o.config.check_keys(keys({&detector_keys, &quadrature_keys}, {"protocol", "measured_log_N", "delta_frac"}),
                            "rangefind gradient");
        const DetectorConfig ref = detector_from(o.config);
        const Method m = parse_method(o.method);
        WideReal measured;
        double truth = std::nan("");
        if (o.config.has("measured_log_N")) {
            if (o.config.has("delta_frac"))
                throw PreconditionError("give either measured_log_N or delta_frac");
            measured.log_value = o.config.get_double("measured_log_N", 0);
        } else {
            // synthetic: N at L (1 + delta_frac), fed back
            DetectorConfig moved = ref;
            truth = o.config.get_double("delta_frac", 5e-4) * ref.L;
            moved.L = ref.L + truth;
            measured = negativity(assemble(moved, m, q).state);
        }
        const GradientEstimate ge = rangefind_gradient(ref, measured, m, q);
        csv = Csv({"dL", "dL_linear", "dL_true", "log_N_ref", "log_N_measured", "dlogN_dL", "log_abs_dN_dL",
                   "ill_conditioned"});
        csv.row({num(ge.dL), num(ge.dL_linear), num(truth), num(ge.N_ref.log_value), num(measured.log_value),
                 num(ge.dlogN_dL), num(ge.log_abs_dN_dL), ge.ill_conditioned ? "1" : "0"});
    } else {
        throw PreconditionError("protocol must be corridor, sudden_death or gradient");
    }
    man["protocol"] = protocol;

    emit(o, table(o, csv), man, seconds_since(t0));
    return 0;
}

int cmd_oracle(const RunOptions& o, const std::string& suite)
{
    const auto t0 = clock_type::now();
    check_format(o);
    o.config.check_keys(keys({&quadrature_keys}), "oracle");
    const QuadratureSettings q = quadrature_from(o.config);
    const auto cases = run_suite(suite, q);
    bool all = true;
    Csv c({"suite", "case", "value", "reference", "rel_err", "tol", "pass"});
    json notes = json::array();
    for (const auto& k : cases) {
        all = all && k.pass;
        c.row({k.suite, k.name, num(k.value), num(k.reference), num(k.rel_err), num(k.tol), k.pass ? "1" : "0"});
        if (!k.note.empty())
            notes.push_back({{"case", k.name}, {"error", k.note}});
    }
    json man = manifest(o, q);
    man["errors"] = notes;
    man["suite"] = suite;
    man["all_pass"] = all;
    emit(o, table(o, c), man, seconds_since(t0));
    return all ? 0 : 1;
}

} // namespace harvest::cli

#include "debtgame/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "debtgame/parallel.hpp"

namespace debtgame {

using nlohmann::json;

namespace {

const char* const kParamKeys[] = {"r", "g", "sigma", "rho", "lambda", "alpha", "kappa", "m", "c1", "c2"};
const char* const kOutputs[] = {"a_star", "b_star", "a_bar", "b0", "qtilde", "residuals"};

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

double number(const json& j, const std::string& key) {
    if (!j.is_number()) config_error("'" + key + "' must be a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& key) {
    if (!j.is_number_integer()) config_error("'" + key + "' must be an integer");
    return j.get<std::int64_t>();
}

void parse_quadrature(const json& j, QuadratureSettings& q) {
    if (!j.is_object()) config_error("'quadrature' must be an object");
    for (const auto& [key, v] : j.items()) {
        if (key == "abs_tol") q.abs_tol = number(v, key);
        else if (key == "rel_tol") q.rel_tol = number(v, key);
        else if (key == "t_max") q.t_max = number(v, key);
        else if (key == "max_subdivisions") q.max_subdivisions = static_cast<int>(integer(v, key));
        else config_error("unknown key 'quadrature." + key + "'");
    }
}

void parse_simulation(const json& j, AppConfig& cfg) {
    if (!j.is_object()) config_error("'simulation' must be an object");
    SimConfig& s = cfg.simulation;
    for (const auto& [key, v] : j.items()) {
        if (key == "x0") s.x0 = number(v, key);
        else if (key == "a") s.a = number(v, key);
        else if (key == "b") s.b = number(v, key);
        else if (key == "dt") s.dt = number(v, key);
        else if (key == "horizon") s.horizon = number(v, key);
        else if (key == "n_paths") s.n_paths = integer(v, key);
        else if (key == "seed") {
            if (!v.is_number_unsigned()) config_error("'seed' must be a non-negative integer");
            s.seed = v.get<std::uint64_t>();
        } else if (key == "antithetic") {
            if (!v.is_boolean()) config_error("'antithetic' must be a boolean");
            s.antithetic = v.get<bool>();
        } else if (key == "crn_tag") {
            if (!v.is_string()) config_error("'crn_tag' must be a string");
            s.crn_tag = v.get<std::string>();
        } else if (key == "threads") s.threads = static_cast<int>(integer(v, key));
        else if (key == "max_path_steps") s.max_path_steps = number(v, key);
        else if (key == "epsilons") {
            if (!v.is_array()) config_error("'epsilons' must be an array");
            cfg.epsilons.clear();
            for (const auto& e : v) cfg.epsilons.push_back(number(e, key));
        } else config_error("unknown key 'simulation." + key + "'");
    }
}

SweepSpec parse_sweep(const json& j) {
    if (!j.is_object()) config_error("'sweep' must be an object");
    SweepSpec spec;
    for (const auto& [key, v] : j.items()) {
        if (key == "vary") {
            if (!v.is_string()) config_error("'vary' must be a string");
            spec.vary = v.get<std::string>();
        } else if (key == "values") {
            if (!v.is_array()) config_error("'values' must be an array");
            for (const auto& e : v) spec.values.push_back(number(e, key));
        } else if (key == "lo") spec.lo = number(v, key);
        else if (key == "hi") spec.hi = number(v, key);
        else if (key == "n") spec.n = static_cast<int>(integer(v, key));
        else if (key == "spacing") {
            if (!v.is_string()) config_error("'spacing' must be a string");
            spec.spacing = parse_spacing(v.get<std::string>());
        } else if (key == "outputs") {
            if (!v.is_array()) config_error("'outputs' must be an array");
            for (const auto& e : v) {
                if (!e.is_string()) config_error("'outputs' entries must be strings");
                spec.outputs.push_back(e.get<std::string>());
            }
        } else config_error("unknown key 'sweep." + key + "'");
    }
    return spec;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

Spacing parse_spacing(const std::string& name) {
    if (name == "linear") return Spacing::Linear;
    if (name == "log") return Spacing::Log;
    if (name == "geometric-to-boundary") return Spacing::GeometricToBoundary;
    config_error("unknown spacing '" + name + "' (linear, log, geometric-to-boundary)");
}

const char* to_string(Spacing spacing) {
    switch (spacing) {
        case Spacing::Linear: return "linear";
        case Spacing::Log: return "log";
        case Spacing::GeometricToBoundary: return "geometric-to-boundary";
    }
    return "?";
}

std::vector<double> SweepSpec::grid(const RawParams& base) const {
    get_param(base, vary);  // rejects unknown names
    const bool ranged = lo || hi || n != 0;
    if (!values.empty()) {
        if (ranged) config_error("sweep takes either 'values' or 'lo'/'hi'/'n', not both");
        return values;
    }
    if (!lo || !hi || n < 1) config_error("sweep needs 'values' or 'lo', 'hi' and n >= 1");
    if (!std::isfinite(*lo) || !std::isfinite(*hi)) config_error("sweep range must be finite");
    if (n == 1) return {*lo};
    if (!(*lo < *hi)) config_error("sweep needs lo < hi");

    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        switch (spacing) {
            case Spacing::Linear:
                out[i] = *lo + (*hi - *lo) * t;
                break;
            case Spacing::Log:
                if (!(*lo > 0.0)) config_error("log spacing needs lo > 0");
                out[i] = *lo * std::pow(*hi / *lo, t);
                break;
            case Spacing::GeometricToBoundary: {
                if (vary != "lambda") config_error("geometric-to-boundary spacing applies to lambda only");
                const double B = regime_boundary(base);
                if (!(*hi < B)) config_error("geometric-to-boundary needs hi below the regime boundary");
                out[i] = B - (B - *lo) * std::pow((B - *hi) / (B - *lo), t);
                break;
            }
        }
    }
    out.front() = *lo;
    out.back() = *hi;
    return out;
}

std::vector<std::string> SweepSpec::columns() const {
    std::set<std::string> wanted;
    for (const auto& o : outputs) {
        if (std::find(std::begin(kOutputs), std::end(kOutputs), o) == std::end(kOutputs)) {
            config_error("unknown sweep output '" + o + "'");
        }
        wanted.insert(o);
    }
    std::vector<std::string> cols;
    for (const char* o : kOutputs) {
        if (!wanted.empty() && !wanted.count(o)) continue;
        if (std::string(o) == "residuals") {
            cols.emplace_back("F_resid");
            cols.emplace_back("G_resid");
        } else {
            cols.emplace_back(o);
        }
    }
    return cols;
}

AppConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Io, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) config_error("config must be a JSON object");

    AppConfig cfg;
    std::set<std::string> seen;
    for (const auto& [key, v] : j.items()) {
        if (key == "quadrature") parse_quadrature(v, cfg.quadrature);
        else if (key == "simulation") parse_simulation(v, cfg);
        else if (key == "sweep") cfg.sweep = parse_sweep(v);
        else if (std::find(std::begin(kParamKeys), std::end(kParamKeys), key) != std::end(kParamKeys)) {
            set_param(cfg.params, key, number(v, key));
            seen.insert(key);
        } else {
            config_error("unknown key '" + key + "'");
        }
    }
    std::string missing;
    for (const char* k : kParamKeys) {
        if (!seen.count(k)) missing += missing.empty() ? k : std::string(", ") + k;
    }
    if (!missing.empty()) config_error("missing parameters: " + missing);
    if (cfg.sweep) cfg.sweep->columns();
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_overrides(AppConfig& config, const Overrides& o) {
    if (o.seed) config.simulation.seed = *o.seed;
    if (o.paths) config.simulation.n_paths = *o.paths;
    if (o.dt) config.simulation.dt = *o.dt;
    const bool touches_sweep = o.vary || o.lo || o.hi || o.n || o.spacing;
    if (!touches_sweep) return;
    if (!config.sweep) config.sweep.emplace();
    SweepSpec& s = *config.sweep;
    if (o.vary) s.vary = *o.vary;
    if (o.lo || o.hi || o.n) s.values.clear();
    if (o.lo) s.lo = *o.lo;
    if (o.hi) s.hi = *o.hi;
    if (o.n) s.n = *o.n;
    if (o.spacing) s.spacing = parse_spacing(*o.spacing);
}

std::string format_number(std::optional<double> value) {
    if (!value) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", *value);
    return buf;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io:
            return 1;
        case ErrorKind::NonFinite:
        case ErrorKind::AssumptionViolation:
        case ErrorKind::Config:
        case ErrorKind::SimulationBudgetExceeded:
        case ErrorKind::MismatchedStreams:
            return 2;
        case ErrorKind::Domain:
        case ErrorKind::BracketFailure:
        case ErrorKind::QuadratureFailure:
        case ErrorKind::BoundaryRegime:
        case ErrorKind::MultipleRoots:
        case ErrorKind::CapExceeded:
        case ErrorKind::PeakNotFound:
            return 3;
    }
    return 3;
}

namespace {

NashSettings nash_settings(const AppConfig& config, bool values) {
    NashSettings s;
    s.quadrature = config.quadrature;
    s.build_values = values;
    return s;
}

int report(const Error& e, const char* stage, std::ostream& err) {
    err << stage << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
}

}  // namespace

int cmd_check(const AppConfig& config, std::ostream& out, std::ostream& err) {
    const RawParams& p = config.params;
    for (const char* k : kParamKeys) out << k << " = " << get_param(p, k) << "\n";
    try {
        const ModelParams params = validate_params(p);
        const Regime regime = classify_regime(params);
        out << "valid: yes\n"
            << "regime: " << to_string(regime.tag) << "\n"
            << "regime boundary lambda: " << regime_boundary(p) << "\n";
        return 0;
    } catch (const ValidationError& e) {
        out << "valid: no\n";
        for (const auto& v : e.violations()) {
            out << "violated: " << v.name << " (" << v.lhs << " vs " << v.rhs << ")\n";
        }
        err << "check: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    }
}

int cmd_roots(const AppConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const ModelParams params = validate_params(config.params);
        const RootPair d = char_roots(params, params.rho());
        const RootPair t = char_roots(params, params.lambda());
        out << "name,value,residual\n";
        auto row = [&](const char* name, double v, std::optional<double> res) {
            out << name << "," << format_number(v) << "," << format_number(res) << "\n";
        };
        row("delta1", d.pos, char_residual(params, params.rho(), d.pos));
        row("delta2", d.neg, char_residual(params, params.rho(), d.neg));
        row("theta1", t.pos, char_residual(params, params.lambda(), t.pos));
        row("theta2", t.neg, char_residual(params, params.lambda(), t.neg));
        row("a_bar", abar(params).a_bar(), std::nullopt);
        row("a_tilde", a_tilde(params), std::nullopt);
        if (classify_regime(params).tag == RegimeTag::LegislatorIntervenes) {
            const QTilde q = qtilde(params);
            row("b0", b0(params), std::nullopt);
            row("qtilde", q.value, q.residual);
        }
        return 0;
    } catch (const Error& e) {
        return report(e, "roots", err);
    }
}

int cmd_nash(const AppConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const ModelParams params = validate_params(config.params);
        const NashOutcome n = solve_nash(params, nash_settings(config, false));
        out << "tag,a_star,b_star,a_bar,b0,qtilde,F_resid,G_resid\n"
            << to_string(n.tag) << "," << format_number(n.a_star) << "," << format_number(n.b_star) << ","
            << format_number(n.a_bar) << "," << format_number(n.b0) << "," << format_number(n.qtilde) << ","
            << format_number(n.F_resid) << "," << format_number(n.G_resid) << "\n";
        return 0;
    } catch (const ValidationError& e) {
        return report(e, "nash: validation", err);
    } catch (const Error& e) {
        return report(e, "nash: solve_nash", err);
    }
}

std::vector<SweepRow> run_sweep(const AppConfig& config, int threads) {
    if (!config.sweep) config_error("no sweep specification");
    const SweepSpec& spec = *config.sweep;
    const std::vector<double> grid = spec.grid(config.params);
    const NashSettings settings = nash_settings(config, false);
    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.value = grid[i];
        try {
            RawParams raw = config.params;
            set_param(raw, spec.vary, grid[i]);
            const ModelParams params = validate_params(raw);
            row.a_bar = abar(params).a_bar();
            const NashOutcome n = solve_nash(params, settings);
            row.a_star = n.a_star;
            row.b_star = n.b_star;
            row.b0 = n.b0;
            row.qtilde = n.qtilde;
            row.F_resid = n.F_resid;
            row.G_resid = n.G_resid;
            row.status = "ok";
        } catch (const Error& e) {
            row.status = e.kind() == ErrorKind::CapExceeded ? "b_star_exceeds_cap" : to_string(e.kind());
        }
    });
    return rows;
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    const auto cols = spec.columns();
    os << spec.vary;
    for (const auto& c : cols) os << "," << c;
    os << ",status\n";
    for (const auto& r : rows) {
        os << format_number(r.value);
        for (const auto& c : cols) {
            std::optional<double> v;
            if (c == "a_star") v = r.a_star;
            else if (c == "b_star") v = r.b_star;
            else if (c == "a_bar") v = r.a_bar;
            else if (c == "b0") v = r.b0;
            else if (c == "qtilde") v = r.qtilde;
            else if (c == "F_resid") v = r.F_resid;
            else if (c == "G_resid") v = r.G_resid;
            os << "," << format_number(v);
        }
        os << "," << r.status << "\n";
    }
}

int cmd_sweep(const AppConfig& config, const std::string& out_path, std::ostream& out, std::ostream& err) {
    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(config, config.simulation.threads);
    } catch (const Error& e) {
        return report(e, "sweep", err);
    }
    std::ostringstream buf;
    write_sweep_csv(buf, *config.sweep, rows);
    if (out_path.empty()) {
        out << buf.str();
        return 0;
    }
    std::ofstream file(out_path, std::ios::binary);
    file << buf.str();
    file.close();
    if (!file) {
        err << "sweep: cannot write '" << out_path << "'\n";
        return 1;
    }
    return 0;
}

int cmd_simulate(const AppConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const ModelParams params = validate_params(config.params);
        SimConfig sim = config.simulation;
        const bool explicit_band = sim.a.has_value() || sim.b.has_value();
        std::optional<NashOutcome> nash;
        if (explicit_band) {
            if (sim.a && sim.b && !(*sim.a < *sim.b)) {
                config_error("simulation thresholds need a < b (degenerate band)");
            }
        } else {
            nash = solve_nash(params, nash_settings(config, true));
            sim.a = nash->a_star;
            sim.b = nash->b_star;
        }

        std::vector<double> starts;
        if (sim.x0 > 0.0) {
            starts.push_back(sim.x0);
        } else if (sim.a && sim.b) {
            starts = {*sim.a, 0.5 * (*sim.a + *sim.b), *sim.b};
        } else if (sim.a) {
            starts = {*sim.a, 2.0 * *sim.a};
        } else if (sim.b) {
            starts = {0.5 * *sim.b, *sim.b};
        } else {
            starts = {params.m()};
        }

        out << "x0,player,analytic,mc_mean,std_error,z,rel_err,tail_bound\n";
        bool failed = false;
        for (double x0 : starts) {
            SimConfig run = sim;
            run.x0 = x0;
            const CostPair cost = simulate_cost_pair(run, params);
            auto emit = [&](const char* player, const SimEstimate& est, std::optional<double> analytic) {
                std::optional<double> z;
                std::optional<double> rel;
                if (analytic) {
                    z = (est.mean - *analytic) / est.std_error;
                    rel = (est.mean - *analytic) / std::abs(*analytic);
                    if (!(std::abs(*z) <= 4.0)) failed = true;
                }
                out << format_number(x0) << "," << player << "," << format_number(analytic) << ","
                    << format_number(est.mean) << "," << format_number(est.std_error) << "," << format_number(z)
                    << "," << format_number(rel) << "," << format_number(est.tail_bound) << "\n";
            };
            emit("government", cost.gov, nash ? std::optional<double>(nash->gov_value(x0)) : std::nullopt);
            emit("legislator", cost.leg, nash ? std::optional<double>(nash->leg_value(x0)) : std::nullopt);
        }
        if (failed) {
            err << "simulate: a Monte Carlo estimate deviates from its closed form by more than 4 SE\n";
            return 4;
        }
        return 0;
    } catch (const Error& e) {
        return report(e, "simulate", err);
    }
}

int cmd_deviation(const AppConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const ModelParams params = validate_params(config.params);
        const NashOutcome nash = solve_nash(params, nash_settings(config, false));
        const DeviationReport rep = deviation_certificate(params, nash, config.epsilons, config.simulation);
        out << "player,epsilon,threshold,base_cost,dev_cost,difference,paired_se,independent_se,passed\n";
        for (const auto& r : rep.rows) {
            out << r.player << "," << format_number(r.epsilon) << "," << format_number(r.threshold) << ","
                << format_number(r.base_cost) << "," << format_number(r.dev_cost) << ","
                << format_number(r.difference.mean) << "," << format_number(r.difference.std_error) << ","
                << format_number(r.difference.independent_std_error) << "," << csv_bool(r.passed) << "\n";
        }
        if (!rep.all_passed) {
            err << "deviation: a unilateral deviation lowered a simulated cost by more than 2 paired SE\n";
            return 4;
        }
        return 0;
    } catch (const Error& e) {
        return report(e, "deviation", err);
    }
}

}  // namespace debtgame

#include "debtgame/equilibrium.hpp"

#include <cmath>
#include <sstream>

#include "debtgame/parallel.hpp"

namespace debtgame {

const char* to_string(NashTag tag) {
    return tag == NashTag::Ceiling ? "Ceiling" : "NoCeiling";
}

double NashOutcome::gov_value(double x) const {
    if (!gov_values) throw Error(ErrorKind::Domain, "outcome was built without value functions");
    return std::visit([x](const auto& v) { return v.value(x); }, *gov_values);
}

double NashOutcome::leg_value(double x) const {
    if (!leg_values) throw Error(ErrorKind::Domain, "outcome was built without value functions");
    return std::visit([x](const auto& v) { return v.value(x); }, *leg_values);
}

namespace {

ext_real psi(const ext_real& b, const ModelParams& params, const LegisConstants<ext_real>& k) {
    return G_as<ext_real>(a_of_b_root(b, params), b, k);
}

NashOutcome no_ceiling(const ModelParams& params, const Regime& regime, const NashSettings& settings) {
    NashOutcome out;
    out.tag = NashTag::NoCeiling;
    out.regime = regime;
    const GovNoCeilingSolution gov = abar(params);
    out.a_bar = gov.a_bar();
    out.a_star = gov.a_bar();
    out.a_star_ext = out.a_star;
    if (settings.build_values) {
        out.gov_values = gov;
        out.leg_values = LegisNoCeilingSolution(gov.a_bar(), params, settings.quadrature);
    }
    return out;
}

}  // namespace

NashOutcome solve_nash(const ModelParams& params, const NashSettings& settings) {
    const Regime regime = classify_regime(params);
    if (regime.tag == RegimeTag::Boundary) {
        throw Error(ErrorKind::BoundaryRegime, "lambda equals r - g + alpha/kappa; no case applies");
    }
    if (regime.tag == RegimeTag::LegislatorAbstains) return no_ceiling(params, regime, settings);
    if (settings.scan_points < 2 || !(settings.cap_factor > 0.0)) {
        throw Error(ErrorKind::Config, "scan needs at least two points and a positive cap");
    }

    const auto k = LegisConstants<ext_real>::from(params);
    const double lower = b0(params) * (1.0 + 1e-9);
    const double cap = settings.cap_factor * params.m();
    if (!(cap > lower)) {
        std::ostringstream os;
        os << "b* exceeds cap " << cap << ": b0 = " << lower << " already lies above it";
        throw Error(ErrorKind::CapExceeded, os.str());
    }

    const int n = settings.scan_points;
    std::vector<double> grid(static_cast<std::size_t>(n));
    std::vector<ext_real> values(grid.size());
    for (int i = 0; i < n; ++i) {
        grid[i] = i == n - 1 ? cap : lower * std::pow(cap / lower, static_cast<double>(i) / (n - 1));
        values[i] = psi(grid[i], params, k);
    }
    std::vector<int> changes;
    for (int i = 0; i + 1 < n; ++i) {
        if ((values[i] > 0) != (values[i + 1] > 0)) changes.push_back(i);
    }
    if (changes.empty()) {
        if (values.front() > 0) {
            std::ostringstream os;
            os << "b* exceeds cap " << cap << ": Psi stays positive on the scan";
            throw Error(ErrorKind::CapExceeded, os.str());
        }
        throw Error(ErrorKind::BracketFailure, "Psi is not positive just above b0");
    }
    if (changes.size() > 1) {
        std::ostringstream os;
        os << "Psi changes sign " << changes.size() << " times; candidate brackets:";
        for (int i : changes) os << " (" << grid[i] << ", " << grid[i + 1] << ")";
        throw Error(ErrorKind::MultipleRoots, os.str());
    }

    ext_real lo = grid[changes[0]];
    ext_real hi = grid[changes[0] + 1];
    const bool rising = !(values[changes[0]] > 0);
    for (int it = 0; it < 200 && hi - lo > ext_real(1e-30) * hi; ++it) {
        const ext_real mid = (lo + hi) / 2;
        const ext_real v = psi(mid, params, k);
        if (v == 0) {
            lo = hi = mid;
            break;
        }
        if ((v > 0) != rising) lo = mid; else hi = mid;
    }
    const ext_real b_star = (lo + hi) / 2;
    const ext_real a_star = a_of_b_root(b_star, params);

    NashOutcome out;
    out.tag = NashTag::Ceiling;
    out.regime = regime;
    out.a_star_ext = a_star;
    out.b_star_ext = b_star;
    out.a_star = static_cast<double>(a_star);
    out.b_star = static_cast<double>(b_star);
    out.a_bar = abar(params).a_bar();
    out.b0 = b0(params);
    out.qtilde = qtilde(params).value;
    const auto gk = GovConstants<ext_real>::from(params);
    out.F_resid = static_cast<double>(abs(F_as<ext_real>(a_star, b_star, gk)));
    out.G_resid = static_cast<double>(abs(G_as<ext_real>(a_star, b_star, k)));
    out.F_scale = static_cast<double>(F_as<ext_real>(b_star, b_star, gk));
    out.psi_lo = static_cast<double>(values.front());
    out.psi_hi = static_cast<double>(values.back());
    out.b_of_a_star = static_cast<double>(b_of_a_root(out.a_star, params));
    out.a_of_b_star = static_cast<double>(a_of_b_root(ext_real(*out.b_star), params));
    if (settings.build_values) {
        out.gov_values = solve_a_of_b(*out.b_star, params);
        out.leg_values = solve_b_of_a(out.a_star, params, settings.quadrature);
    }
    return out;
}

IterationResult best_response_iteration(const ModelParams& params, double a_start, double tol, int max_iter) {
    double a = a_start;
    double b = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        b = static_cast<double>(b_of_a_root(a, params));
        const double next = solve_a_of_b(b, params).a_of_b();
        if (std::abs(next - a) <= tol * std::max(a, 1e-300)) return {next, b, it, true};
        a = next;
    }
    return {a, b, max_iter, false};
}

LambdaLimitTable lambda_limit_diagnostic(const RawParams& base, const std::vector<double>& lambdas,
                                         const NashSettings& settings, int threads) {
    LambdaLimitTable table;
    table.rows.resize(lambdas.size());
    {
        RawParams raw = base;
        table.a_bar = abar(validate_params(raw)).a_bar();
    }
    NashSettings quiet = settings;
    quiet.build_values = false;
    parallel_for(lambdas.size(), threads, [&](std::size_t i) {
        LambdaRow& row = table.rows[i];
        row.lambda = lambdas[i];
        try {
            RawParams raw = base;
            raw.lambda = lambdas[i];
            const ModelParams params = validate_params(raw);
            const NashOutcome out = solve_nash(params, quiet);
            row.a_star = out.a_star;
            row.b_star = out.b_star;
            row.a_gap = std::abs(out.a_star - table.a_bar);
            row.qtilde = out.qtilde;
            row.F_resid = out.F_resid;
            row.G_resid = out.G_resid;
            row.status = "ok";
        } catch (const Error& e) {
            row.status = e.kind() == ErrorKind::CapExceeded ? "b_star_exceeds_cap" : to_string(e.kind());
        }
    });
    const LambdaRow* prev = nullptr;
    for (const auto& row : table.rows) {
        if (row.status != "ok") continue;
        if (prev != nullptr) {
            if (!(*row.b_star > *prev->b_star)) table.b_star_increasing = false;
            if (!(*row.a_gap < *prev->a_gap)) table.a_gap_decreasing = false;
        }
        prev = &row;
    }
    return table;
}

DeviationReport deviation_certificate(const ModelParams& params, const NashOutcome& outcome,
                                      const std::vector<double>& epsilons, const SimConfig& sim) {
    if (outcome.tag != NashTag::Ceiling) {
        throw Error(ErrorKind::Domain, "deviation certificate needs a Ceiling outcome");
    }
    const double a_star = outcome.a_star;
    const double b_star = *outcome.b_star;

    SimConfig common = sim;
    if (!(common.x0 > 0.0)) common.x0 = 0.5 * (a_star + b_star);
    common.a = a_star;
    common.b = b_star;

    DeviationReport report;
    auto run_player = [&](const std::string& player, double rate) {
        const bool gov = player == "government";
        SimConfig base = common;
        if (!(base.horizon > 0.0)) base.horizon = std::log(1e6) / rate;
        for (double eps : epsilons) {
            SimConfig dev = base;
            (gov ? dev.a : dev.b) = (gov ? a_star : b_star) * (1.0 + eps);
            check_sim_config(dev, params);
        }
        const SimSamples base_samples = simulate_samples(base, params);
        const auto& base_costs = gov ? base_samples.gov : base_samples.leg;
        const double base_mean = pairwise_sum(base_costs.data(), base_costs.size()) / base_costs.size();
        for (double eps : epsilons) {
            SimConfig dev = base;
            const double threshold = (gov ? a_star : b_star) * (1.0 + eps);
            (gov ? dev.a : dev.b) = threshold;
            const SimSamples dev_samples = simulate_samples(dev, params);
            const auto& dev_costs = gov ? dev_samples.gov : dev_samples.leg;
            DeviationRow row;
            row.player = player;
            row.epsilon = eps;
            row.threshold = threshold;
            row.base_cost = base_mean;
            row.dev_cost = pairwise_sum(dev_costs.data(), dev_costs.size()) / dev_costs.size();
            row.difference = paired_difference(base_costs, dev_costs);
            row.passed = row.difference.mean >= -2.0 * row.difference.std_error;
            report.all_passed = report.all_passed && row.passed;
            report.rows.push_back(row);
        }
    };
    run_player("government", params.rho());
    run_player("legislator", params.lambda());
    return report;
}

}  // namespace debtgame

#include "debtgame/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "debtgame/parallel.hpp"
#include "sim_kernel.hpp"

namespace debtgame {

namespace {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::int64_t step_count(const SimConfig& config, const ModelParams& params) {
    return static_cast<std::int64_t>(std::ceil(config.effective_horizon(params) / config.dt - 1e-9));
}

struct Moments {
    double mean;
    double std_error;
};

Moments moments(const std::vector<double>& x) {
    const std::size_t n = x.size();
    const double mean = pairwise_sum(x.data(), n) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
    const double var = n > 1 ? pairwise_sum(sq.data(), n) / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

/// Discounted cost bounds after the horizon.  With both thresholds the log
/// state lives on a band of width w, and Ito applied to (Y - ln a)^2 bounds
/// the expected boundary local time over a period s by w/2 + (|nu| + sigma^2/(2w)) s.
std::pair<double, double> tail_bounds(const SimConfig& c, const ModelParams& p, double horizon, bool& heuristic) {
    const double rho = p.rho();
    const double lam = p.lambda();
    const double nu = p.net_rate() - 0.5 * p.sigma() * p.sigma();
    if (c.a && c.b) {
        heuristic = false;
        const double a = *c.a;
        const double b = *c.b;
        const double w = std::log(b / a);
        const double rate = std::abs(nu) + p.sigma() * p.sigma() / (2.0 * w);
        const double gov = std::exp(-rho * horizon)
                         * (b * b / (2.0 * rho) + (p.c1() * b + p.c2() * a) * (0.5 * w + rate / rho));
        const double leg = std::exp(-lam * horizon)
                         * (p.alpha() * std::max(b - p.m(), 0.0) / lam + p.kappa() * b * (0.5 * w + rate / lam));
        return {gov, leg};
    }
    // moment bounds of the unreflected ratio started from the larger of x0 and a
    heuristic = true;
    const double x_hi = c.b ? *c.b : std::max(c.x0, c.a.value_or(0.0));
    const double margin = p.quad_margin();
    const double gov = x_hi * x_hi * std::exp(-margin * horizon) / (2.0 * margin);
    const double leg = p.alpha() * x_hi * std::exp(-p.legis_margin() * horizon) / p.legis_margin();
    return {gov, leg};
}

}  // namespace

double SimConfig::effective_horizon(const ModelParams& params) const {
    if (horizon > 0.0) return horizon;
    return std::log(1e6) / std::min(params.rho(), params.lambda());
}

int default_threads() {
    if (const char* env = std::getenv("DEBTGAME_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

double pairwise_sum(const double* values, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += values[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

void check_sim_config(const SimConfig& c, const ModelParams& params) {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, msg); };
    if (!(c.x0 > 0.0) || !std::isfinite(c.x0)) fail("x0 must be positive and finite");
    if (!(c.dt > 0.0) || !(c.dt <= 1e-2)) fail("dt must lie in (0, 1e-2]");
    if (!std::isfinite(c.horizon) || c.horizon < 0.0) fail("horizon must be finite and non-negative");
    if (c.n_paths < 2 || c.n_paths % 2 != 0) fail("n_paths must be a positive even count");
    if (c.a && (!(*c.a > 0.0) || !std::isfinite(*c.a))) fail("a must be positive and finite");
    if (c.b && (!(*c.b > 0.0) || !std::isfinite(*c.b))) fail("b must be positive and finite");
    if (c.a && c.b && !(*c.a < *c.b)) fail("thresholds must satisfy a < b");
    const double path_steps = static_cast<double>(c.n_paths) * static_cast<double>(step_count(c, params));
    if (path_steps > c.max_path_steps) {
        std::ostringstream os;
        os << "simulation needs " << path_steps << " path-steps, budget is " << c.max_path_steps;
        throw Error(ErrorKind::SimulationBudgetExceeded, os.str());
    }
}

SimSamples simulate_samples(const SimConfig& c, const ModelParams& p) {
    check_sim_config(c, p);
    detail::KernelSetup setup{};
    setup.lower = c.a.value_or(0.0);
    setup.upper = c.b.value_or(std::numeric_limits<double>::max());
    setup.x_start = std::clamp(c.x0, setup.lower, setup.upper);
    setup.drift_dt = (p.net_rate() - 0.5 * p.sigma() * p.sigma()) * c.dt;
    setup.vol_sqrt_dt = p.sigma() * std::sqrt(c.dt);
    setup.dt = c.dt;
    setup.steps = step_count(c, p);
    setup.rho = p.rho();
    setup.lambda = p.lambda();
    setup.alpha = p.alpha();
    setup.kappa = p.kappa();
    setup.m = p.m();
    setup.c1 = p.c1();
    setup.c2 = p.c2();
    setup.antithetic = c.antithetic;

    // the t = 0 jump is booked undiscounted
    const double over = std::max(c.x0 - setup.upper, 0.0);
    const double under = std::max(setup.lower - c.x0, 0.0);
    const double gov_jump = p.c1() * over - p.c2() * under;
    const double leg_jump = p.kappa() * over;

    const std::int64_t units = c.n_paths / 2;
    const int per_unit = c.antithetic ? 1 : 2;
    SimSamples out;
    out.horizon = static_cast<double>(setup.steps) * c.dt;
    out.gov.assign(static_cast<std::size_t>(units * per_unit), 0.0);
    out.leg.assign(out.gov.size(), 0.0);

    const std::uint64_t base = detail::mix64(c.seed ^ detail::mix64(fnv1a(c.crn_tag)));
    const std::int64_t blocks = (units + detail::kBlock - 1) / detail::kBlock;
    parallel_for(static_cast<std::size_t>(blocks), c.threads, [&](std::size_t blk) {
        std::uint64_t keys[detail::kBlock];
        const std::int64_t first = static_cast<std::int64_t>(blk) * detail::kBlock;
        const int count = static_cast<int>(std::min<std::int64_t>(detail::kBlock, units - first));
        for (int j = 0; j < count; ++j) {
            keys[j] = detail::mix64(base + detail::mix64(static_cast<std::uint64_t>(first + j)));
        }
        detail::run_block(setup, keys, count, out.gov.data() + first * per_unit,
                          out.leg.data() + first * per_unit);
    });
    for (double& v : out.gov) v += gov_jump;
    for (double& v : out.leg) v += leg_jump;
    return out;
}

CostPair simulate_cost_pair(const SimConfig& c, const ModelParams& p) {
    const SimSamples samples = simulate_samples(c, p);
    bool heuristic = false;
    const auto [gov_tail, leg_tail] = tail_bounds(c, p, samples.horizon, heuristic);
    auto make = [&](const std::vector<double>& x, double tail) {
        const Moments mo = moments(x);
        SimEstimate e;
        e.mean = mo.mean;
        e.std_error = mo.std_error;
        e.n_paths = c.n_paths;
        e.dt = c.dt;
        e.horizon = samples.horizon;
        e.seed = c.seed;
        e.tail_bound = tail;
        e.tail_bound_heuristic = heuristic;
        return e;
    };
    return {make(samples.gov, gov_tail), make(samples.leg, leg_tail)};
}

PairedDifference paired_difference(const std::vector<double>& base, const std::vector<double>& dev) {
    if (base.size() != dev.size() || base.empty()) {
        throw Error(ErrorKind::MismatchedStreams, "paired samples differ in length");
    }
    std::vector<double> diff(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) diff[i] = dev[i] - base[i];
    const Moments md = moments(diff);
    return PairedDifference{md.mean, md.std_error, std::hypot(moments(base).std_error, moments(dev).std_error)};
}

CrnComparison crn_compare(const SimConfig& base, const SimConfig& dev, const ModelParams& p) {
    if (base.seed != dev.seed || base.crn_tag != dev.crn_tag) {
        throw Error(ErrorKind::MismatchedStreams, "common random numbers need equal seed and crn_tag");
    }
    if (base.n_paths != dev.n_paths || base.antithetic != dev.antithetic || base.dt != dev.dt
        || base.effective_horizon(p) != dev.effective_horizon(p)) {
        throw Error(ErrorKind::MismatchedStreams, "common random numbers need the same paths, dt and horizon");
    }
    const SimSamples sb = simulate_samples(base, p);
    const SimSamples sd = simulate_samples(dev, p);
    bool heuristic_b = false;
    bool heuristic_d = false;
    const auto tails_b = tail_bounds(base, p, sb.horizon, heuristic_b);
    const auto tails_d = tail_bounds(dev, p, sd.horizon, heuristic_d);

    auto estimate = [&](const std::vector<double>& x, const SimConfig& c, double horizon, double tail, bool h) {
        const Moments mo = moments(x);
        return SimEstimate{mo.mean, mo.std_error, c.n_paths, c.dt, horizon, c.seed, tail, h};
    };
    CrnComparison out;
    out.gov = paired_difference(sb.gov, sd.gov);
    out.leg = paired_difference(sb.leg, sd.leg);
    out.base = {estimate(sb.gov, base, sb.horizon, tails_b.first, heuristic_b),
                estimate(sb.leg, base, sb.horizon, tails_b.second, heuristic_b)};
    out.dev = {estimate(sd.gov, dev, sd.horizon, tails_d.first, heuristic_d),
               estimate(sd.leg, dev, sd.horizon, tails_d.second, heuristic_d)};
    return out;
}

}  // namespace debtgame

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "debtgame/model.hpp"

namespace debtgame {

/// One Monte Carlo run of the reflected debt ratio.
struct SimConfig {
    double x0 = 0.0;
    std::optional<double> a;  ///< lower reflection threshold (government)
    std::optional<double> b;  ///< upper reflection threshold (legislator)
    double dt = 1e-3;
    /// Non-positive selects ln(1e6) / min(rho, lambda).
    double horizon = 0.0;
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 20240601;
    bool antithetic = true;
    std::string crn_tag = "default";
    /// Worker count; 0 reads DEBTGAME_THREADS, then the hardware count.
    int threads = 0;
    /// Refuses runs with more path-steps than this.
    double max_path_steps = 5e11;

    double effective_horizon(const ModelParams& params) const;
};

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    double dt = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    /// Bound on the discounted cost discarded after the horizon.
    double tail_bound = 0.0;
    /// True when tail_bound rests on a moment heuristic rather than on the
    /// bounded range of a two-sided band.
    bool tail_bound_heuristic = false;
};

struct CostPair {
    SimEstimate gov;  ///< government cost J
    SimEstimate leg;  ///< legislator cost I
};

/// Independent replicate costs of a run: pair means under antithetic
/// sampling, single paths otherwise.  Replicate i depends only on
/// (seed, crn_tag, i), never on the worker count.
struct SimSamples {
    std::vector<double> gov;
    std::vector<double> leg;
    double horizon = 0.0;
};

/// Validates the config (Error(Config)) and the step budget
/// (Error(SimulationBudgetExceeded)).
void check_sim_config(const SimConfig& config, const ModelParams& params);

SimSamples simulate_samples(const SimConfig& config, const ModelParams& params);

/// Discounted government and legislator costs under reflection at a and b.
CostPair simulate_cost_pair(const SimConfig& config, const ModelParams& params);

struct PairedDifference {
    double mean = 0.0;       ///< mean of dev - base
    double std_error = 0.0;  ///< SE of the per-replicate differences
    double independent_std_error = 0.0;  ///< sqrt(SE_base^2 + SE_dev^2)
};

/// Replicate-wise dev - base over samples from the same streams.
PairedDifference paired_difference(const std::vector<double>& base, const std::vector<double>& dev);

struct CrnComparison {
    PairedDifference gov;
    PairedDifference leg;
    CostPair base;
    CostPair dev;
};

/// Runs both configs on identical Gaussian increments.  Throws
/// Error(MismatchedStreams) unless seed, crn_tag and the sampling grid agree.
CrnComparison crn_compare(const SimConfig& base, const SimConfig& dev, const ModelParams& params);

/// Sum in a fixed pairwise order, independent of how values were produced.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace debtgame

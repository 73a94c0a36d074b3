#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "debtgame/government.hpp"
#include "debtgame/legislator.hpp"
#include "debtgame/simulation.hpp"

namespace debtgame {

struct NashSettings {
    /// Upper end of the ceiling scan, in units of m.
    double cap_factor = 1e6;
    int scan_points = 200;
    QuadratureSettings quadrature;
    /// Build the value-function handles (needs quadrature in Case II).
    bool build_values = true;
};

enum class NashTag { Ceiling, NoCeiling };

const char* to_string(NashTag tag);

/// Equilibrium of the game: Ceiling{a*, b*} when the legislator intervenes,
/// NoCeiling{a_bar} otherwise.
struct NashOutcome {
    NashTag tag = NashTag::NoCeiling;
    Regime regime{};
    double a_star = 0.0;
    std::optional<double> b_star;
    double a_bar = 0.0;
    std::optional<double> b0;
    std::optional<double> qtilde;
    /// |F(a*, b*)| and |G(a*, b*)| at the extended-precision pair.
    std::optional<double> F_resid;
    std::optional<double> G_resid;
    /// F(b*, b*), the natural scale of F.
    std::optional<double> F_scale;
    ext_real a_star_ext = 0;
    ext_real b_star_ext = 0;
    /// b(a*) and a(b*) recomputed from the rounded thresholds.
    std::optional<double> b_of_a_star;
    std::optional<double> a_of_b_star;
    /// Psi(b) = G(a(b), b) at the two ends of the scan.
    std::optional<double> psi_lo;
    std::optional<double> psi_hi;

    std::optional<std::variant<GovBestResponse, GovNoCeilingSolution>> gov_values;
    std::optional<std::variant<LegisBestResponse, LegisNoCeilingSolution>> leg_values;

    /// Government and legislator value functions along the equilibrium.
    double gov_value(double x) const;
    double leg_value(double x) const;
};

/// Throws BoundaryRegime on the regime boundary, MultipleRoots when the scan
/// of Psi(b) = G(a(b), b) changes sign more than once, CapExceeded when Psi
/// stays positive up to cap_factor * m.
NashOutcome solve_nash(const ModelParams& params, const NashSettings& settings = {});

/// Fixed-point iteration a -> a(b(a)), kept independent of solve_nash.
struct IterationResult {
    double a;
    double b;
    int iterations;
    bool converged;
};

IterationResult best_response_iteration(const ModelParams& params, double a_start,
                                        double tol = 1e-13, int max_iter = 500);

/// One row per lambda of a grid approaching r - g + alpha/kappa.
struct LambdaRow {
    double lambda;
    std::string status;  ///< "ok", "b_star_exceeds_cap" or an error kind
    std::optional<double> a_star;
    std::optional<double> b_star;
    std::optional<double> a_gap;  ///< |a* - a_bar|
    std::optional<double> qtilde;
    std::optional<double> F_resid;
    std::optional<double> G_resid;
};

struct LambdaLimitTable {
    std::vector<LambdaRow> rows;
    double a_bar = 0.0;
    /// Over the rows that solved.
    bool b_star_increasing = true;
    bool a_gap_decreasing = true;
};

LambdaLimitTable lambda_limit_diagnostic(const RawParams& base, const std::vector<double>& lambdas,
                                         const NashSettings& settings = {}, int threads = 0);

struct DeviationRow {
    std::string player;  ///< "government" or "legislator"
    double epsilon;
    double threshold;
    double base_cost;
    double dev_cost;
    PairedDifference difference;  ///< deviating cost minus equilibrium cost
    bool passed;                  ///< difference.mean >= -2 paired SE
};

struct DeviationReport {
    std::vector<DeviationRow> rows;
    bool all_passed = true;
};

/// Perturbs a* (resp. b*) by each relative epsilon with the opponent's
/// threshold fixed and compares simulated costs under common random numbers.
/// Uses sim.x0 when positive, else (a* + b*)/2.  A non-positive sim.horizon
/// is replaced per player by ln(1e6) over that player's discount rate.
DeviationReport deviation_certificate(const ModelParams& params, const NashOutcome& outcome,
                                      const std::vector<double>& epsilons, const SimConfig& sim);

}  // namespace debtgame

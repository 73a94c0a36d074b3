#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/multiprecision/float128.hpp>

#include "debtgame/errors.hpp"

namespace debtgame {

/// Extended precision used inside the threshold solvers.  The best-response
/// equations are badly conditioned at extreme thresholds (powers of b/a of
/// order 1e14), so roots are located and certified in quad precision.
using ext_real = boost::multiprecision::float128;

/// Unvalidated parameter set, in the order of the JSON config keys.
struct RawParams {
    double r = 0.0;       ///< interest rate on debt
    double g = 0.0;       ///< GDP growth rate
    double sigma = 0.0;   ///< debt-ratio volatility
    double rho = 0.0;     ///< government discount rate
    double lambda = 0.0;  ///< legislator discount rate
    double alpha = 0.0;   ///< tax-compliance cost slope
    double kappa = 0.0;   ///< legislator marginal intervention cost
    double m = 0.0;       ///< healthy-debt reference level
    double c1 = 0.0;      ///< government marginal cost of forced reduction
    double c2 = 0.0;      ///< government marginal benefit of issuance
};

/// Parameter set of the comparative-statics section, with lambda = 0.1.
RawParams reference_params();

/// Sets a parameter by its config key. Throws Error(Config) on unknown names.
void set_param(RawParams& raw, const std::string& name, double value);
double get_param(const RawParams& raw, const std::string& name);

/// Parameters that passed every model assumption.  Only obtainable from
/// validate_params, so downstream code never re-checks.
class ModelParams {
public:
    const RawParams& raw() const noexcept { return raw_; }

    double r() const noexcept { return raw_.r; }
    double g() const noexcept { return raw_.g; }
    double sigma() const noexcept { return raw_.sigma; }
    double rho() const noexcept { return raw_.rho; }
    double lambda() const noexcept { return raw_.lambda; }
    double alpha() const noexcept { return raw_.alpha; }
    double kappa() const noexcept { return raw_.kappa; }
    double m() const noexcept { return raw_.m; }
    double c1() const noexcept { return raw_.c1; }
    double c2() const noexcept { return raw_.c2; }

    /// r - g, the drift rate of the uncontrolled ratio.
    double net_rate() const noexcept { return raw_.r - raw_.g; }
    /// rho - 2(r-g) - sigma^2 > 0, the quadratic-cost discount margin.
    double quad_margin() const noexcept {
        return raw_.rho - 2.0 * net_rate() - raw_.sigma * raw_.sigma;
    }
    /// lambda - (r-g) > 0.
    double legis_margin() const noexcept { return raw_.lambda - net_rate(); }

    /// Stable hash of the ten values, used to key memo tables.
    std::uint64_t hash() const noexcept;

private:
    explicit ModelParams(const RawParams& raw) : raw_(raw) {}
    friend ModelParams validate_params(const RawParams& raw);

    RawParams raw_;
};

/// Checks every model assumption.  Throws ValidationError listing all
/// violated inequalities (kind AssumptionViolation) or the non-finite
/// inputs (kind NonFinite).  Never clamps.
ModelParams validate_params(const RawParams& raw);

/// Roots of (sigma^2/2) x (x-1) + (r-g) x - discount = 0.
struct RootPair {
    double pos;
    double neg;
    double discount;
};

RootPair char_roots(const ModelParams& params, double discount);

/// Residual of the characteristic quadratic at x.
double char_residual(const ModelParams& params, double discount, double x);

template <class Real>
std::pair<Real, Real> char_roots_as(const ModelParams& params, double discount) {
    using std::sqrt;
    const Real sig = params.sigma();
    const Real qa = sig * sig / 2;
    const Real qb = Real(params.r()) - Real(params.g()) - qa;
    const Real qc = -Real(discount);
    // larger-magnitude root first, the other from the Vieta product
    const Real disc = sqrt(qb * qb - 4 * qa * qc);
    const Real q = qb >= 0 ? -(qb + disc) / 2 : -(qb - disc) / 2;
    const Real x1 = q / qa;
    const Real x2 = qc / q;
    return x1 > x2 ? std::pair<Real, Real>{x1, x2} : std::pair<Real, Real>{x2, x1};
}

enum class RegimeTag { LegislatorIntervenes, LegislatorAbstains, Boundary };

const char* to_string(RegimeTag tag);

struct Regime {
    RegimeTag tag;
    /// lambda - (r - g + alpha/kappa)
    double margin;
};

Regime classify_regime(const ModelParams& params);

/// r - g + alpha/kappa: the legislator discount rate separating the regimes.
double regime_boundary(const RawParams& raw);

}  // namespace debtgame

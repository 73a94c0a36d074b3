#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "debtgame/model.hpp"

namespace debtgame {

/// Controls for the time integrals over (0, infinity).
struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    /// Truncation horizon.  Non-positive selects
    /// max(50, -ln(rel_tol) / (lambda - (r-g))).
    double t_max = 0.0;
    int max_subdivisions = 2000;

    double horizon(const ModelParams& params) const;
};

/// Phi(z), evaluated through erfc so the far tails keep full relative accuracy.
double std_normal_cdf(double z);
double std_normal_pdf(double z);

struct D1D2 {
    double d1;
    double d2;
};

/// Black-Scholes-type arguments of the legislator's resolvent, centred at m.
/// Throws Error(Domain) unless x > 0 and t > 0.
D1D2 d1_d2(double x, double t, const ModelParams& params);

/// Value of an integral together with its error estimate (quadrature plus
/// analytic truncation tail).
struct IntegralEstimate {
    double value;
    double error;
};

/// H and its first two derivatives at one point.
struct ResolventPoint {
    double value;
    double first;
    double second;
};

/// Evaluator of the resolvent cost H(x) = E int e^{-lambda t} alpha (X_t - m)^+ dt
/// of the uncontrolled ratio, with derivatives
///   H'(x)  = alpha int e^{-(lambda-(r-g))t} Phi(d1(x,t)) dt,
///   H''(x) = alpha/x int e^{-(lambda-(r-g))t} phi(d1(x,t)) / (sigma sqrt t) dt.
/// Results are memoized per x; the memo is shared by copies and guarded by a
/// mutex, and is observationally transparent.
class Resolvent {
public:
    Resolvent(const ModelParams& params, QuadratureSettings settings = {});

    const ModelParams& params() const noexcept { return params_; }
    const QuadratureSettings& settings() const noexcept { return settings_; }

    ResolventPoint at(double x) const;
    double value(double x) const { return at(x).value; }
    double first(double x) const { return at(x).first; }
    double second(double x) const { return at(x).second; }

    /// The raw integrals with their error estimates (not memoized).
    IntegralEstimate value_integral(double x) const;
    IntegralEstimate first_integral(double x) const;
    IntegralEstimate second_integral(double x) const;

    std::size_t memo_size() const;

private:
    struct Memo {
        std::mutex mutex;
        std::map<double, ResolventPoint> entries;
    };

    ModelParams params_;
    QuadratureSettings settings_;
    std::shared_ptr<Memo> memo_;
};

double H(double x, const ModelParams& params, const QuadratureSettings& settings = {});

/// Coefficient of x^{theta2} in the legislator's no-intervention value.
double Dbar2(double a, const ModelParams& params, const QuadratureSettings& settings = {});

/// Coefficients (D3, D4) of x^{theta1}, x^{theta2} in the legislator's value on
/// (a, b), fixed by U2'(b) = kappa and U2''(b) = 0.
std::pair<double, double> D3_D4(double b, const ModelParams& params,
                                const QuadratureSettings& settings = {});
std::pair<double, double> D3_D4(double b, const Resolvent& resolvent);

}  // namespace debtgame

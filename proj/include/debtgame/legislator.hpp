#pragma once

#include <optional>

#include "debtgame/model.hpp"
#include "debtgame/special_functions.hpp"

namespace debtgame {

template <class Real>
struct LegisConstants {
    Real theta1;
    Real theta2;
    Real mu;  ///< lambda - (r-g)
    Real alpha;
    Real kappa;
    Real m;

    static LegisConstants from(const ModelParams& params) {
        const auto [t1, t2] = char_roots_as<Real>(params, params.lambda());
        const Real mu = Real(params.lambda()) - (Real(params.r()) - Real(params.g()));
        return {t1, t2, mu, Real(params.alpha()), Real(params.kappa()), Real(params.m())};
    }
};

/// Optimality condition for the ceiling b given a lower threshold a:
/// G(x, b) is U2'(x) of the candidate built with smooth fit at b.
/// Indicators use b >= m, b > m > a and a >= m.
template <class Real>
Real G_as(Real a, Real b, const LegisConstants<Real>& k) {
    using std::pow;
    const Real gap = k.theta1 - k.theta2;
    const Real ceiling_rate = k.alpha / k.mu;
    const Real ratio = b / a;
    Real out = ((k.theta1 - 1) * pow(ratio, 1 - k.theta2) + (1 - k.theta2) * pow(ratio, 1 - k.theta1))
             * (k.kappa - (b >= k.m ? ceiling_rate : Real(0))) / gap;
    if (b > k.m && k.m > a) {
        const Real mr = k.m / a;
        out += ceiling_rate / gap * ((1 - k.theta2) * pow(mr, 1 - k.theta1) + (k.theta1 - 1) * pow(mr, 1 - k.theta2));
    }
    if (a >= k.m) out += ceiling_rate;
    return out;
}

template <class Real>
Real dG_db_as(Real a, Real b, const LegisConstants<Real>& k) {
    using std::pow;
    const Real ratio = b / a;
    return (pow(ratio, 1 - k.theta2) - pow(ratio, 1 - k.theta1)) * (k.theta1 - 1) * (1 - k.theta2)
         / ((k.theta1 - k.theta2) * k.mu * b) * (k.kappa * k.mu - (b > k.m ? k.alpha : Real(0)));
}

/// G evaluated in extended precision; requires 0 < a <= b.
double G(double a, double b, const ModelParams& params);
ext_real G_ext(ext_real a, ext_real b, const ModelParams& params);
double dG_db(double a, double b, const ModelParams& params);

/// Lower bound of every optimal ceiling.  Throws Domain unless
/// alpha > kappa (lambda - (r-g)).
double b0(const ModelParams& params);

struct QTilde {
    double value;
    double residual;
};

/// Slope of b(a) = a / q for a > m: the root in (0,1) of
/// (1-t2)(k mu - alpha) q^{t1-1} + (t1-1)(k mu - alpha) q^{t2-1} + alpha (t1-t2).
QTilde qtilde(const ModelParams& params);
double qtilde_residual(double q, const ModelParams& params);

/// Legislator best response b(a) to a government threshold a, with U2(.; a).
class LegisBestResponse {
public:
    double a() const noexcept { return a_; }
    double b_of_a() const noexcept { return static_cast<double>(b_ext_); }
    const ext_real& b_of_a_ext() const noexcept { return b_ext_; }
    /// |G(a, b(a))| at the extended-precision root.
    double residual() const noexcept { return residual_; }
    double dG_db() const noexcept { return dg_db_; }
    double b0() const noexcept { return b0_; }
    double bracket_lo() const noexcept { return bracket_lo_; }
    double bracket_hi() const noexcept { return bracket_hi_; }
    double D3() const noexcept { return D3_; }
    double D4() const noexcept { return D4_; }

    /// U2(x; a): constant below a, D3 x^t1 + D4 x^t2 + H(x) on (a, b(a)),
    /// slope kappa above b(a).
    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

private:
    friend LegisBestResponse solve_b_of_a(double a, const ModelParams& params, const Resolvent& resolvent);
    explicit LegisBestResponse(Resolvent resolvent) : resolvent_(std::move(resolvent)) {}

    double middle(double x) const;

    Resolvent resolvent_;
    double a_ = 0.0;
    ext_real b_ext_ = 0;
    double residual_ = 0.0;
    double dg_db_ = 0.0;
    double b0_ = 0.0;
    double bracket_lo_ = 0.0;
    double bracket_hi_ = 0.0;
    double D3_ = 0.0;
    double D4_ = 0.0;
    double theta1_ = 0.0;
    double theta2_ = 0.0;
    double kappa_ = 0.0;
    double value_at_a_ = 0.0;
    double value_at_b_ = 0.0;
};

/// Root of G(a, .) on (max(a, m), infinity).  Requires the
/// LegislatorIntervenes regime.
LegisBestResponse solve_b_of_a(double a, const ModelParams& params, const Resolvent& resolvent);
LegisBestResponse solve_b_of_a(double a, const ModelParams& params, const QuadratureSettings& settings = {});

/// Only the ceiling, without the value function (no quadrature).
ext_real b_of_a_root(double a, const ModelParams& params);
ext_real b_of_a_root(const ext_real& a, const ModelParams& params);

double U2(double x, double a, const ModelParams& params, const QuadratureSettings& settings = {});

/// Legislator value when it never intervenes (LegislatorAbstains regime).
class LegisNoCeilingSolution {
public:
    LegisNoCeilingSolution(double a, const ModelParams& params, const QuadratureSettings& settings = {});
    LegisNoCeilingSolution(double a, const Resolvent& resolvent);

    double a() const noexcept { return a_; }
    double Dbar2() const noexcept { return dbar2_; }

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

private:
    Resolvent resolvent_;
    double a_;
    double dbar2_;
    double theta2_;
    double value_at_a_;
};

double Vbar2(double x, double a, const ModelParams& params, const QuadratureSettings& settings = {});

}  // namespace debtgame

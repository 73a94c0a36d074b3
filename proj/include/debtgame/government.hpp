#pragma once

#include "debtgame/model.hpp"

namespace debtgame {

/// Constants of the government problem in a chosen precision.
template <class Real>
struct GovConstants {
    Real delta1;  ///< positive root at rate rho
    Real delta2;  ///< negative root at rate rho
    Real margin;  ///< rho - 2(r-g) - sigma^2
    Real c1;
    Real c2;

    static GovConstants from(const ModelParams& params) {
        const auto [d1, d2] = char_roots_as<Real>(params, params.rho());
        const Real sig = params.sigma();
        const Real margin = Real(params.rho()) - 2 * (Real(params.r()) - Real(params.g())) - sig * sig;
        return {d1, d2, margin, Real(params.c1()), Real(params.c2())};
    }
};

/// Optimality condition for the lower threshold a given a ceiling b.
/// F(a,b) = margin (delta1-delta2) (c1 - U1'(b-)), where U1 is the candidate
/// built with smooth fit at a.
template <class Real>
Real F_as(Real a, Real b, const GovConstants<Real>& k) {
    using std::pow;
    const Real ratio = b / a;
    return ((2 - k.delta2) * a - k.c2 * (1 - k.delta2) * k.margin) * pow(ratio, k.delta1 - 1)
         + ((k.delta1 - 2) * a - k.c2 * (k.delta1 - 1) * k.margin) * pow(ratio, k.delta2 - 1)
         - (k.delta1 - k.delta2) * (b - k.c1 * k.margin);
}

template <class Real>
Real dF_da_as(Real a, Real b, const GovConstants<Real>& k) {
    using std::pow;
    const Real ratio = b / a;
    return (pow(ratio, k.delta1 - 1) - pow(ratio, k.delta2 - 1)) / a
         * (k.c2 * (k.delta1 - 1) * (1 - k.delta2) * k.margin - (k.delta1 - 2) * (2 - k.delta2) * a);
}

template <class Real>
Real dF_db_as(Real a, Real b, const GovConstants<Real>& k) {
    using std::pow;
    const Real ratio = b / a;
    const Real scaled = (k.delta1 - 1) * ((2 - k.delta2) * a - k.c2 * (1 - k.delta2) * k.margin) * pow(ratio, k.delta1 - 1)
                      + (k.delta2 - 1) * ((k.delta1 - 2) * a - k.c2 * (k.delta1 - 1) * k.margin) * pow(ratio, k.delta2 - 1)
                      - (k.delta1 - k.delta2) * b;
    return scaled / b;
}

/// F evaluated in extended precision; requires 0 < a <= b.
double F(double a, double b, const ModelParams& params);
ext_real F_ext(ext_real a, ext_real b, const ModelParams& params);
double dF_da(double a, double b, const ModelParams& params);
double dF_db(double a, double b, const ModelParams& params);

/// c2 (rho - (r-g)): a(b) stays below this level for every ceiling.
double a_tilde(const ModelParams& params);

/// Government best response when the legislator never intervenes.
class GovNoCeilingSolution {
public:
    explicit GovNoCeilingSolution(const ModelParams& params);

    double a_bar() const noexcept { return a_bar_; }
    double D1_bar() const noexcept { return d1_bar_; }

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

private:
    double a_bar_;
    double d1_bar_;
    double delta2_;
    double quad_coeff_;  ///< 1 / (2 margin)
    double c2_;
    double value_at_a_;
};

GovNoCeilingSolution abar(const ModelParams& params);

/// Government best response a(b) to a ceiling b, with its value U1(.; b).
class GovBestResponse {
public:
    double b() const noexcept { return b_; }
    double a_of_b() const noexcept { return static_cast<double>(a_ext_); }
    /// The root as located by the solver, before rounding to double.
    const ext_real& a_of_b_ext() const noexcept { return a_ext_; }
    /// |F(a(b), b)| at the extended-precision root.
    double residual() const noexcept { return residual_; }
    double dF_da() const noexcept { return df_da_; }
    double bracket_lo() const noexcept { return bracket_lo_; }
    double bracket_hi() const noexcept { return bracket_hi_; }
    double D1() const noexcept { return D1_; }
    double D2() const noexcept { return D2_; }

    /// U1(x; b): slope c2 below a(b), ODE solution on (a(b), b), slope c1 above b.
    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

private:
    friend GovBestResponse solve_a_of_b(double b, const ModelParams& params);
    GovBestResponse() = default;

    double middle(double x) const;

    double b_ = 0.0;
    ext_real a_ext_ = 0;
    double residual_ = 0.0;
    double df_da_ = 0.0;
    double bracket_lo_ = 0.0;
    double bracket_hi_ = 0.0;
    double D1_ = 0.0;
    double D2_ = 0.0;
    double e1_ = 0.0;
    double e2_ = 0.0;
    double delta1_ = 0.0;
    double delta2_ = 0.0;
    double quad_coeff_ = 0.0;
    double c1_ = 0.0;
    double c2_ = 0.0;
    double value_at_a_ = 0.0;
    double value_at_b_ = 0.0;
};

/// Unique root of F(., b) on (0, min(b, a_tilde)); throws BracketFailure if
/// the bracket has no sign change.
GovBestResponse solve_a_of_b(double b, const ModelParams& params);

/// Only the threshold, at an extended-precision ceiling.
ext_real a_of_b_root(const ext_real& b, const ModelParams& params);

double U1(double x, double b, const ModelParams& params);

/// Peak of b -> a(b).
struct HatB {
    double b_hat;
    double a_hat;
};

/// Maximizes a(b) over a log grid on [1e-3 m, 1e4 m] and refines by Brent
/// minimization.  Throws PeakNotFound when the maximum sits on the grid edge.
HatB hat_b_diagnostic(const ModelParams& params);

}  // namespace debtgame

#include "debtgame/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace debtgame {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

unsigned depth_for(int max_subdivisions) {
    int depth = 0;
    while ((1 << depth) < std::max(1, max_subdivisions)) ++depth;
    return static_cast<unsigned>(depth);
}

/// Integrates f(t) over (0, t_max) in the variable s = sqrt(t), splitting at
/// s_split where the integrand has its transition.  `tail` is an analytic
/// bound on the discarded integral over (t_max, infinity) and `envelope` is the
/// integral of the integrand's bound over (0, infinity); the relative tolerance
/// is measured against it, which is the scale the horizon rule controls.
template <class F>
IntegralEstimate integrate_time(F f, double s_split, const QuadratureSettings& settings,
                                double t_max, double tail, double envelope, const char* what) {
    const double s_max = std::sqrt(t_max);
    const unsigned depth = depth_for(settings.max_subdivisions);
    auto in_s = [&](double s) { return 2.0 * s * f(s * s, s); };

    double total = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    auto piece = [&](double lo, double hi) {
        double err = 0.0;
        double piece_l1 = 0.0;
        total += Kronrod::integrate(in_s, lo, hi, depth, settings.rel_tol, &err, &piece_l1);
        error += err;
        l1 += piece_l1;
    };
    if (s_split > 0.0 && s_split < s_max) {
        piece(0.0, s_split);
        piece(s_split, s_max);
    } else {
        piece(0.0, s_max);
    }
    // quadrature and truncation are each held to the tolerance
    const double allowed = std::max(settings.abs_tol, settings.rel_tol * std::max({std::abs(total), l1, envelope}));
    const bool ok = error <= allowed && tail <= allowed * (1.0 + 1e-9) && std::isfinite(total);
    error += tail;
    if (!ok) {
        std::ostringstream os;
        os << what << ": error estimate " << error << " exceeds tolerance " << allowed;
        throw Error(ErrorKind::QuadratureFailure, os.str());
    }
    return {total, error};
}

/// Time at which Phi(d1(x, .)) switches between its t -> 0 limit and its bulk.
double split_point(double x, const ModelParams& params) {
    return std::abs(std::log(x / params.m())) / params.sigma();
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::Domain, std::string(what) + " must be positive and finite");
    }
}

}  // namespace

double QuadratureSettings::horizon(const ModelParams& params) const {
    if (t_max > 0.0) return t_max;
    return std::max(50.0, -std::log(rel_tol) / params.legis_margin());
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

D1D2 d1_d2(double x, double t, const ModelParams& params) {
    require_positive(x, "x");
    require_positive(t, "t");
    const double vol = params.sigma() * std::sqrt(t);
    const double d1 = (std::log(x / params.m()) + (params.net_rate() + 0.5 * params.sigma() * params.sigma()) * t) / vol;
    return {d1, d1 - vol};
}

namespace {

/// Phi(d1) and Phi(d2) extended by their right limits at t = 0.
std::pair<double, double> cdf_pair(double x, double t, const ModelParams& params) {
    if (t <= 0.0) {
        const double lim = x > params.m() ? 1.0 : (x < params.m() ? 0.0 : 0.5);
        return {lim, lim};
    }
    const auto d = d1_d2(x, t, params);
    return {std_normal_cdf(d.d1), std_normal_cdf(d.d2)};
}

}  // namespace

Resolvent::Resolvent(const ModelParams& params, QuadratureSettings settings)
    : params_(params), settings_(settings), memo_(std::make_shared<Memo>()) {
    if (!(settings_.abs_tol > 0.0) || !(settings_.rel_tol > 0.0) || settings_.max_subdivisions < 1) {
        throw Error(ErrorKind::Config, "quadrature tolerances must be positive");
    }
}

IntegralEstimate Resolvent::value_integral(double x) const {
    require_positive(x, "x");
    const double mu = params_.legis_margin();
    const double lam = params_.lambda();
    const double m = params_.m();
    const double t_max = settings_.horizon(params_);
    auto f = [&](double t, double) {
        const auto [p1, p2] = cdf_pair(x, t, params_);
        return x * std::exp(-mu * t) * p1 - m * std::exp(-lam * t) * p2;
    };
    const double tail = x * std::exp(-mu * t_max) / mu;
    auto est = integrate_time(f, split_point(x, params_), settings_, t_max, tail, x / mu, "H");
    return {params_.alpha() * est.value, params_.alpha() * est.error};
}

IntegralEstimate Resolvent::first_integral(double x) const {
    require_positive(x, "x");
    const double mu = params_.legis_margin();
    const double t_max = settings_.horizon(params_);
    auto f = [&](double t, double) { return std::exp(-mu * t) * cdf_pair(x, t, params_).first; };
    const double tail = std::exp(-mu * t_max) / mu;
    auto est = integrate_time(f, split_point(x, params_), settings_, t_max, tail, 1.0 / mu, "H'");
    return {params_.alpha() * est.value, params_.alpha() * est.error};
}

IntegralEstimate Resolvent::second_integral(double x) const {
    require_positive(x, "x");
    const double mu = params_.legis_margin();
    const double sig = params_.sigma();
    const double t_max = settings_.horizon(params_);
    // phi(d1)/(sigma sqrt t) dt = 2 phi(d1)/sigma ds; the 2s Jacobian is
    // applied by integrate_time, so divide it back out here.
    auto f = [&](double t, double s) {
        if (t <= 0.0) return 0.0;
        const double d1 = d1_d2(x, t, params_).d1;
        return std::exp(-mu * t) * std_normal_pdf(d1) / (sig * s);
    };
    const double tail = std::exp(-mu * t_max) / (mu * sig * std::sqrt(2.0 * std::numbers::pi * t_max));
    const double envelope = 1.0 / (sig * std::sqrt(2.0 * mu));
    auto est = integrate_time(f, split_point(x, params_), settings_, t_max, tail, envelope, "H''");
    return {params_.alpha() * est.value / x, params_.alpha() * est.error / x};
}

ResolventPoint Resolvent::at(double x) const {
    {
        std::lock_guard lock(memo_->mutex);
        auto it = memo_->entries.find(x);
        if (it != memo_->entries.end()) return it->second;
    }
    const ResolventPoint point{value_integral(x).value, first_integral(x).value, second_integral(x).value};
    std::lock_guard lock(memo_->mutex);
    memo_->entries.emplace(x, point);
    return point;
}

std::size_t Resolvent::memo_size() const {
    std::lock_guard lock(memo_->mutex);
    return memo_->entries.size();
}

double H(double x, const ModelParams& params, const QuadratureSettings& settings) {
    return Resolvent(params, settings).value_integral(x).value;
}

double Dbar2(double a, const ModelParams& params, const QuadratureSettings& settings) {
    require_positive(a, "a");
    const double theta2 = char_roots_as<double>(params, params.lambda()).second;
    const double h1 = Resolvent(params, settings).first_integral(a).value;
    return -std::pow(a, 1.0 - theta2) * h1 / theta2;
}

std::pair<double, double> D3_D4(double b, const Resolvent& resolvent) {
    const ModelParams& params = resolvent.params();
    require_positive(b, "b");
    if (classify_regime(params).tag != RegimeTag::LegislatorIntervenes) {
        throw Error(ErrorKind::Domain, "D3/D4 require lambda < r - g + alpha/kappa");
    }
    const auto [theta1, theta2] = char_roots_as<double>(params, params.lambda());
    const ResolventPoint h = resolvent.at(b);
    // With A = D3 theta1 b^{theta1-1}, B = D4 theta2 b^{theta2-1}:
    //   A + B = kappa - H'(b),   (theta1-1) A + (theta2-1) B = -b H''(b).
    const double slack = params.kappa() - h.first;
    const double curv = b * h.second;
    const double gap = theta1 - theta2;
    const double A = ((1.0 - theta2) * slack - curv) / gap;
    const double B = ((theta1 - 1.0) * slack + curv) / gap;
    return {A * std::pow(b, 1.0 - theta1) / theta1, B * std::pow(b, 1.0 - theta2) / theta2};
}

std::pair<double, double> D3_D4(double b, const ModelParams& params, const QuadratureSettings& settings) {
    return D3_D4(b, Resolvent(params, settings));
}

}  // namespace debtgame

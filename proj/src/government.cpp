#include "debtgame/government.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/tools/minima.hpp>

namespace debtgame {

namespace {

void require_ordered(double a, double b) {
    if (!(a > 0.0) || !(a <= b) || !std::isfinite(b)) {
        std::ostringstream os;
        os << "F requires 0 < a <= b (a=" << a << ", b=" << b << ")";
        throw Error(ErrorKind::Domain, os.str());
    }
}

using ExtConstants = GovConstants<ext_real>;

}  // namespace

double F(double a, double b, const ModelParams& params) {
    require_ordered(a, b);
    return static_cast<double>(F_as<ext_real>(a, b, ExtConstants::from(params)));
}

ext_real F_ext(ext_real a, ext_real b, const ModelParams& params) {
    require_ordered(static_cast<double>(a), static_cast<double>(b));
    return F_as<ext_real>(a, b, ExtConstants::from(params));
}

double dF_da(double a, double b, const ModelParams& params) {
    require_ordered(a, b);
    return static_cast<double>(dF_da_as<ext_real>(a, b, ExtConstants::from(params)));
}

double dF_db(double a, double b, const ModelParams& params) {
    require_ordered(a, b);
    return static_cast<double>(dF_db_as<ext_real>(a, b, ExtConstants::from(params)));
}

double a_tilde(const ModelParams& params) {
    return params.c2() * (params.rho() - params.net_rate());
}

GovNoCeilingSolution::GovNoCeilingSolution(const ModelParams& params) {
    const auto k = ExtConstants::from(params);
    const ext_real a = (1 - k.delta2) * k.c2 * k.margin / (2 - k.delta2);
    const ext_real d1 = -1 / (k.margin * k.delta2 * (k.delta2 - 1) * pow(a, k.delta2 - 2));
    a_bar_ = static_cast<double>(a);
    d1_bar_ = static_cast<double>(d1);
    delta2_ = static_cast<double>(k.delta2);
    quad_coeff_ = static_cast<double>(1 / (2 * k.margin));
    c2_ = params.c2();
    value_at_a_ = static_cast<double>(d1 * pow(a, k.delta2) + a * a / (2 * k.margin));
}

double GovNoCeilingSolution::value(double x) const {
    if (x <= a_bar_) return value_at_a_ - c2_ * (a_bar_ - x);
    return d1_bar_ * std::pow(x, delta2_) + quad_coeff_ * x * x;
}

double GovNoCeilingSolution::derivative(double x) const {
    if (x <= a_bar_) return c2_;
    return d1_bar_ * delta2_ * std::pow(x, delta2_ - 1.0) + 2.0 * quad_coeff_ * x;
}

double GovNoCeilingSolution::second_derivative(double x) const {
    if (x <= a_bar_) return 0.0;
    return d1_bar_ * delta2_ * (delta2_ - 1.0) * std::pow(x, delta2_ - 2.0) + 2.0 * quad_coeff_;
}

GovNoCeilingSolution abar(const ModelParams& params) { return GovNoCeilingSolution(params); }

// The middle piece is stored as E1 (x/a)^delta1 + E2 (x/a)^delta2 + x^2/(2 margin)
// with E_i = D_i a^{delta_i}, which stays finite for thresholds far from 1.
double GovBestResponse::middle(double x) const {
    const double ratio = x / static_cast<double>(a_ext_);
    return e1_ * std::pow(ratio, delta1_) + e2_ * std::pow(ratio, delta2_) + quad_coeff_ * x * x;
}

double GovBestResponse::value(double x) const {
    const double a = a_of_b();
    if (x <= a) return value_at_a_ - c2_ * (a - x);
    if (x >= b_) return value_at_b_ + c1_ * (x - b_);
    return middle(x);
}

double GovBestResponse::derivative(double x) const {
    const double a = a_of_b();
    if (x <= a) return c2_;
    if (x >= b_) return c1_;
    const double ratio = x / a;
    return (e1_ * delta1_ * std::pow(ratio, delta1_) + e2_ * delta2_ * std::pow(ratio, delta2_)) / x
         + 2.0 * quad_coeff_ * x;
}

double GovBestResponse::second_derivative(double x) const {
    const double a = a_of_b();
    if (x <= a || x >= b_) return 0.0;
    const double ratio = x / a;
    return (e1_ * delta1_ * (delta1_ - 1.0) * std::pow(ratio, delta1_)
            + e2_ * delta2_ * (delta2_ - 1.0) * std::pow(ratio, delta2_)) / (x * x)
         + 2.0 * quad_coeff_;
}

namespace {

struct FloorRoot {
    ext_real root;
    ext_real value;
    double lo;
    double hi;
};

FloorRoot locate_floor(const ext_real& bx, const ModelParams& params) {
    const auto k = ExtConstants::from(params);
    const double b = static_cast<double>(bx);
    const ext_real upper = std::min(bx, ext_real(a_tilde(params)));
    constexpr double kEps = 1e-10;

    ext_real lo = kEps * upper;
    ext_real hi = upper;
    auto f = [&](const ext_real& a) { return F_as<ext_real>(a, bx, k); };
    const ext_real f_lo = f(lo);
    const ext_real f_hi = f(hi);
    if (!(f_lo < 0) || !(f_hi > 0)) {
        std::ostringstream os;
        os << "no sign change of F(., " << b << ") on (" << static_cast<double>(lo) << ", "
           << static_cast<double>(upper) << "): F=" << static_cast<double>(f_lo) << ", "
           << static_cast<double>(f_hi);
        throw Error(ErrorKind::BracketFailure, os.str());
    }

    // geometric bisection until the bracket is 1e-14 wide relative to its ends
    while (hi - lo > ext_real(1e-14) * hi) {
        const ext_real mid = hi / lo > 4 ? sqrt(lo * hi) : (lo + hi) / 2;
        if (f(mid) < 0) lo = mid; else hi = mid;
    }
    ext_real root = (lo + hi) / 2;
    ext_real value = f(root);
    // Newton polish, repeated while it keeps reducing |F|; one step from a
    // 1e-14 bracket is not enough where dF/da reaches 1e15
    for (int step = 0; step < 4 && value != 0; ++step) {
        const ext_real next = root - value / dF_da_as<ext_real>(root, bx, k);
        if (!(next > lo / 2) || !(next < hi * 2)) break;
        const ext_real next_value = f(next);
        if (!(abs(next_value) < abs(value))) break;
        root = next;
        value = next_value;
    }
    return {root, value, static_cast<double>(kEps * upper), static_cast<double>(upper)};
}

void require_ceiling(double b) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw Error(ErrorKind::Domain, "solve_a_of_b requires a positive finite ceiling");
    }
}

}  // namespace

ext_real a_of_b_root(const ext_real& b, const ModelParams& params) {
    require_ceiling(static_cast<double>(b));
    return locate_floor(b, params).root;
}

GovBestResponse solve_a_of_b(double b, const ModelParams& params) {
    require_ceiling(b);
    const auto k = ExtConstants::from(params);
    const ext_real bx = b;
    const FloorRoot found = locate_floor(bx, params);
    const ext_real root = found.root;

    GovBestResponse out;
    out.b_ = b;
    out.a_ext_ = root;
    out.residual_ = static_cast<double>(abs(found.value));
    out.df_da_ = static_cast<double>(dF_da_as<ext_real>(root, bx, k));
    out.bracket_lo_ = found.lo;
    out.bracket_hi_ = found.hi;

    // smooth fit at a: U1'(a) = c2 and U1''(a) = 0
    const ext_real gap = k.delta1 - k.delta2;
    const ext_real e1 = ((k.delta2 - 2) * root - k.c2 * (k.delta2 - 1) * k.margin) * root
                      / (k.delta1 * gap * k.margin);
    const ext_real e2 = ((k.delta1 - 2) * root - k.c2 * (k.delta1 - 1) * k.margin) * root
                      / (-k.delta2 * gap * k.margin);
    out.e1_ = static_cast<double>(e1);
    out.e2_ = static_cast<double>(e2);
    out.D1_ = static_cast<double>(e1 / pow(root, k.delta1));
    out.D2_ = static_cast<double>(e2 / pow(root, k.delta2));
    out.delta1_ = static_cast<double>(k.delta1);
    out.delta2_ = static_cast<double>(k.delta2);
    out.quad_coeff_ = static_cast<double>(1 / (2 * k.margin));
    out.c1_ = params.c1();
    out.c2_ = params.c2();
    const ext_real ratio_b = bx / root;
    out.value_at_a_ = static_cast<double>(e1 + e2 + root * root / (2 * k.margin));
    out.value_at_b_ = static_cast<double>(e1 * pow(ratio_b, k.delta1) + e2 * pow(ratio_b, k.delta2)
                                          + bx * bx / (2 * k.margin));
    return out;
}

double U1(double x, double b, const ModelParams& params) {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "U1 requires x > 0");
    return solve_a_of_b(b, params).value(x);
}

HatB hat_b_diagnostic(const ModelParams& params) {
    constexpr int kPoints = 400;
    const double lo = std::log(1e-3 * params.m());
    const double hi = std::log(1e4 * params.m());
    std::vector<double> grid(kPoints);
    std::vector<double> values(kPoints);
    int best = 0;
    for (int i = 0; i < kPoints; ++i) {
        grid[i] = lo + (hi - lo) * i / (kPoints - 1);
        values[i] = solve_a_of_b(std::exp(grid[i]), params).a_of_b();
        if (values[i] > values[best]) best = i;
    }
    if (best == 0 || best == kPoints - 1) {
        throw Error(ErrorKind::PeakNotFound, "a(b) attains its maximum at the edge of the search range");
    }
    auto neg_a = [&](double log_b) { return -solve_a_of_b(std::exp(log_b), params).a_of_b(); };
    const auto [log_b, neg] = boost::math::tools::brent_find_minima(neg_a, grid[best - 1], grid[best + 1], 40);
    return {std::exp(log_b), -neg};
}

}  // namespace debtgame

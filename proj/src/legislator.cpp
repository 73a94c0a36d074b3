#include "debtgame/legislator.hpp"

#include <cmath>
#include <sstream>

namespace debtgame {

namespace {

using ExtConstants = LegisConstants<ext_real>;

void require_ordered(double a, double b) {
    if (!(a > 0.0) || !(a <= b) || !std::isfinite(b)) {
        std::ostringstream os;
        os << "G requires 0 < a <= b (a=" << a << ", b=" << b << ")";
        throw Error(ErrorKind::Domain, os.str());
    }
}

void require_intervention(const ModelParams& params, const char* what) {
    const Regime regime = classify_regime(params);
    if (regime.tag == RegimeTag::Boundary) {
        throw Error(ErrorKind::BoundaryRegime, std::string(what) + ": lambda sits on r - g + alpha/kappa");
    }
    if (regime.tag != RegimeTag::LegislatorIntervenes) {
        throw Error(ErrorKind::Domain, std::string(what) + " requires lambda < r - g + alpha/kappa");
    }
}

}  // namespace

double G(double a, double b, const ModelParams& params) {
    require_ordered(a, b);
    return static_cast<double>(G_as<ext_real>(a, b, ExtConstants::from(params)));
}

ext_real G_ext(ext_real a, ext_real b, const ModelParams& params) {
    require_ordered(static_cast<double>(a), static_cast<double>(b));
    return G_as<ext_real>(a, b, ExtConstants::from(params));
}

double dG_db(double a, double b, const ModelParams& params) {
    require_ordered(a, b);
    return static_cast<double>(dG_db_as<ext_real>(a, b, ExtConstants::from(params)));
}

double b0(const ModelParams& params) {
    const double denom = params.alpha() - params.kappa() * params.legis_margin();
    if (!(denom > 0.0)) {
        throw Error(ErrorKind::Domain, "b0 requires alpha > kappa (lambda - (r-g))");
    }
    const double theta2 = char_roots_as<double>(params, params.lambda()).second;
    return std::pow(params.alpha() / denom, 1.0 / (1.0 - theta2)) * params.m();
}

namespace {

ext_real qtilde_equation(const ext_real& q, const ExtConstants& k) {
    const ext_real slack = k.kappa * k.mu - k.alpha;
    return (1 - k.theta2) * slack * pow(q, k.theta1 - 1) + (k.theta1 - 1) * slack * pow(q, k.theta2 - 1)
         + k.alpha * (k.theta1 - k.theta2);
}

}  // namespace

double qtilde_residual(double q, const ModelParams& params) {
    return static_cast<double>(qtilde_equation(q, ExtConstants::from(params)));
}

QTilde qtilde(const ModelParams& params) {
    require_intervention(params, "qtilde");
    const auto k = ExtConstants::from(params);
    ext_real hi = 1;
    ext_real lo = ext_real(0.5);
    while (qtilde_equation(lo, k) >= 0) {
        lo /= 2;
        if (lo < ext_real(1e-300)) throw Error(ErrorKind::BracketFailure, "qtilde: no sign change on (0, 1)");
    }
    if (!(qtilde_equation(hi, k) > 0)) throw Error(ErrorKind::BracketFailure, "qtilde: equation not positive at 1");
    // increasing in q, so plain bisection; geometric while the bracket spans decades
    for (int it = 0; it < 400 && hi - lo > ext_real(1e-30) * hi; ++it) {
        const ext_real mid = hi / lo > 4 ? sqrt(lo * hi) : (lo + hi) / 2;
        if (qtilde_equation(mid, k) < 0) lo = mid; else hi = mid;
    }
    const ext_real q = (lo + hi) / 2;
    return {static_cast<double>(q), static_cast<double>(abs(qtilde_equation(q, k)))};
}

namespace {

struct CeilingRoot {
    ext_real root;
    ext_real value;
    double lo;
    double hi;
};

CeilingRoot locate_ceiling(const ext_real& a, const ModelParams& params) {
    require_intervention(params, "solve_b_of_a");
    const auto k = ExtConstants::from(params);
    auto g = [&](const ext_real& b) { return G_as<ext_real>(a, b, k); };
    const double m = params.m();
    const double lower_bound = b0(params);
    const double a_d = static_cast<double>(a);

    ext_real lo = std::max(a_d, m) * (1.0 + 1e-9);
    if (lo < a) lo = a * (1 + ext_real(1e-9));
    // b(a) >= b0, so start there when G is still positive
    const ext_real tight = lower_bound * (1.0 - 1e-12);
    if (tight > lo && g(tight) > 0) lo = tight;
    if (!(g(lo) > 0)) {
        std::ostringstream os;
        os << "G(" << a_d << ", .) is not positive at the lower bracket end " << static_cast<double>(lo);
        throw Error(ErrorKind::BracketFailure, os.str());
    }
    const double cap = 1e8 * m;
    ext_real hi = lo * 2;
    while (!(g(hi) < 0)) {
        lo = hi;
        hi *= 2;
        if (hi > cap) {
            std::ostringstream os;
            os << "G(" << a_d << ", .) stays positive up to the cap " << cap;
            throw Error(ErrorKind::BracketFailure, os.str());
        }
    }
    const double bracket_lo = static_cast<double>(lo);
    const double bracket_hi = static_cast<double>(hi);
    while (hi - lo > ext_real(1e-14) * hi) {
        const ext_real mid = (lo + hi) / 2;
        if (g(mid) > 0) lo = mid; else hi = mid;
    }
    ext_real root = (lo + hi) / 2;
    ext_real value = g(root);
    for (int step = 0; step < 4 && value != 0; ++step) {
        const ext_real next = root - value / dG_db_as<ext_real>(a, root, k);
        if (!(next > lo / 2) || !(next < hi * 2)) break;
        const ext_real next_value = g(next);
        if (!(abs(next_value) < abs(value))) break;
        root = next;
        value = next_value;
    }
    return {root, value, bracket_lo, bracket_hi};
}

}  // namespace

ext_real b_of_a_root(const ext_real& a, const ModelParams& params) {
    if (!(a > 0)) throw Error(ErrorKind::Domain, "solve_b_of_a requires a > 0");
    return locate_ceiling(a, params).root;
}

ext_real b_of_a_root(double a, const ModelParams& params) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::Domain, "solve_b_of_a requires a positive finite a");
    return locate_ceiling(a, params).root;
}

LegisBestResponse solve_b_of_a(double a, const ModelParams& params, const Resolvent& resolvent) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::Domain, "solve_b_of_a requires a positive finite a");
    const CeilingRoot found = locate_ceiling(a, params);
    const auto k = ExtConstants::from(params);

    LegisBestResponse out(resolvent);
    out.a_ = a;
    out.b_ext_ = found.root;
    out.residual_ = static_cast<double>(abs(found.value));
    out.dg_db_ = static_cast<double>(dG_db_as<ext_real>(a, found.root, k));
    out.b0_ = b0(params);
    out.bracket_lo_ = found.lo;
    out.bracket_hi_ = found.hi;
    const double b = out.b_of_a();
    const auto [d3, d4] = D3_D4(b, resolvent);
    out.D3_ = d3;
    out.D4_ = d4;
    out.theta1_ = static_cast<double>(k.theta1);
    out.theta2_ = static_cast<double>(k.theta2);
    out.kappa_ = params.kappa();
    out.value_at_a_ = out.middle(a);
    out.value_at_b_ = out.middle(b);
    return out;
}

LegisBestResponse solve_b_of_a(double a, const ModelParams& params, const QuadratureSettings& settings) {
    return solve_b_of_a(a, params, Resolvent(params, settings));
}

double LegisBestResponse::middle(double x) const {
    return D3_ * std::pow(x, theta1_) + D4_ * std::pow(x, theta2_) + resolvent_.value(x);
}

double LegisBestResponse::value(double x) const {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "U2 requires x > 0");
    if (x <= a_) return value_at_a_;
    const double b = b_of_a();
    if (x >= b) return value_at_b_ + kappa_ * (x - b);
    return middle(x);
}

double LegisBestResponse::derivative(double x) const {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "U2 requires x > 0");
    if (x <= a_) return 0.0;
    if (x >= b_of_a()) return kappa_;
    return D3_ * theta1_ * std::pow(x, theta1_ - 1.0) + D4_ * theta2_ * std::pow(x, theta2_ - 1.0)
         + resolvent_.first(x);
}

double LegisBestResponse::second_derivative(double x) const {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "U2 requires x > 0");
    if (x <= a_ || x >= b_of_a()) return 0.0;
    return D3_ * theta1_ * (theta1_ - 1.0) * std::pow(x, theta1_ - 2.0)
         + D4_ * theta2_ * (theta2_ - 1.0) * std::pow(x, theta2_ - 2.0) + resolvent_.second(x);
}

double U2(double x, double a, const ModelParams& params, const QuadratureSettings& settings) {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "U2 requires x > 0");
    return solve_b_of_a(a, params, settings).value(x);
}

LegisNoCeilingSolution::LegisNoCeilingSolution(double a, const ModelParams& params,
                                               const QuadratureSettings& settings)
    : LegisNoCeilingSolution(a, Resolvent(params, settings)) {}

LegisNoCeilingSolution::LegisNoCeilingSolution(double a, const Resolvent& resolvent)
    : resolvent_(resolvent), a_(a) {
    const ModelParams& params = resolvent.params();
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::Domain, "Vbar2 requires a positive finite a");
    if (classify_regime(params).tag != RegimeTag::LegislatorAbstains) {
        throw Error(ErrorKind::Domain, "Vbar2 requires lambda > r - g + alpha/kappa");
    }
    theta2_ = char_roots_as<double>(params, params.lambda()).second;
    dbar2_ = -std::pow(a, 1.0 - theta2_) * resolvent_.first(a) / theta2_;
    value_at_a_ = dbar2_ * std::pow(a, theta2_) + resolvent_.value(a);
}

double LegisNoCeilingSolution::value(double x) const {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "Vbar2 requires x > 0");
    if (x <= a_) return value_at_a_;
    return dbar2_ * std::pow(x, theta2_) + resolvent_.value(x);
}

double LegisNoCeilingSolution::derivative(double x) const {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "Vbar2 requires x > 0");
    if (x <= a_) return 0.0;
    return dbar2_ * theta2_ * std::pow(x, theta2_ - 1.0) + resolvent_.first(x);
}

double LegisNoCeilingSolution::second_derivative(double x) const {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "Vbar2 requires x > 0");
    if (x <= a_) return 0.0;
    return dbar2_ * theta2_ * (theta2_ - 1.0) * std::pow(x, theta2_ - 2.0) + resolvent_.second(x);
}

double Vbar2(double x, double a, const ModelParams& params, const QuadratureSettings& settings) {
    return LegisNoCeilingSolution(a, params, settings).value(x);
}

}  // namespace debtgame

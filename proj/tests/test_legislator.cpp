#include <doctest.h>

#include <cmath>

#include "debtgame/legislator.hpp"
#include "debtgame/simulation.hpp"
#include "oracles.hpp"

using namespace debtgame;

namespace {

ModelParams table(double lambda = 0.1) { return validate_params(oracle::table(lambda)); }

double b0_oracle(const RawParams& p) {
    const auto [t1, t2] = oracle::roots(p, p.lambda);
    const double mu = p.lambda - (p.r - p.g);
    return p.m * std::pow(p.alpha / (p.alpha - p.kappa * mu), 1.0 / (1.0 - static_cast<double>(t2)));
}

}  // namespace

TEST_CASE("b0 closed form") {
    const ModelParams p = table();
    CHECK(b0(p) == doctest::Approx(b0_oracle(p.raw())).epsilon(1e-14));
    CHECK(b0(p) == doctest::Approx(std::pow(0.15 / 0.093, 1 / 2.8923) * 0.6).epsilon(1e-4));
    CHECK(b0(p) > p.m());
    CHECK(b0(table(0.005 + 1e-9)) == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(b0(table(0.25)) > b0(table(0.2)));
    CHECK(b0(table(0.2549)) > b0(table(0.25)));
    CHECK_THROWS_AS(b0(table(0.3)), Error);
}

TEST_CASE("qtilde root") {
    const ModelParams p = table();
    const QTilde q = qtilde(p);
    CHECK(q.value > 0.0);
    CHECK(q.value < 1.0);
    CHECK(q.residual <= 1e-12);
    CHECK(std::abs(qtilde_residual(q.value, p)) <= 1e-12);
    const RootPair t = char_roots(p, p.lambda());
    CHECK(qtilde_residual(1.0, p) == doctest::Approx((t.pos - t.neg) * p.kappa() * p.legis_margin()).epsilon(1e-12));
    CHECK(qtilde_residual(1.0, p) > 0.0);
    double prev = q.value;
    for (double lambda : {0.2, 0.25, 0.2549, 0.254999}) {
        const double next = qtilde(table(lambda)).value;
        CHECK(next < prev);
        prev = next;
    }
    CHECK(prev < 0.1);
}

TEST_CASE("G at the diagonal and far out") {
    const ModelParams p = table();
    for (double a : {0.1, 0.6, 2.0}) CHECK(G(a, a, p) == doctest::Approx(p.kappa()).epsilon(1e-12));
    CHECK(G(0.3, 1e4, p) < -1e3);
    CHECK(G(0.3, 1e6, p) < G(0.3, 1e4, p));
}

TEST_CASE("dG/db against central differences and its sign") {
    const ModelParams p = table();
    for (double a : {0.2, 0.45, 1.2}) {
        for (double frac : {1.1, 1.6, 2.5, 6.0}) {
            const double b = a * frac;
            if (std::abs(b - p.m()) < 1e-3) continue;
            const double h = 1e-7 * b;
            const double fd = (G(a, b + h, p) - G(a, b - h, p)) / (2 * h);
            const double exact = dG_db(a, b, p);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
            if (b < std::max(a, p.m())) CHECK(exact > 0.0);
            if (b > std::max(a, p.m())) CHECK(exact < 0.0);
        }
    }
}

TEST_CASE("b(a) agrees with the shooting oracle") {
    const ModelParams p = table();
    const double lower = b0(p);
    for (double a : {0.05, 0.3, 0.55, 0.9, 1.2}) {
        const LegisBestResponse br = solve_b_of_a(a, p);
        const double ref = static_cast<double>(oracle::b_of_a(p.raw(), a));
        CHECK(br.b_of_a() == doctest::Approx(ref).epsilon(1e-10));
        CHECK(br.b_of_a() >= lower);
        CHECK(br.dG_db() < 0.0);
        CHECK(br.residual() <= 1e-12 * p.kappa());
    }
}

TEST_CASE("b(a) is linear above m and tends to b0") {
    const ModelParams p = table();
    const double q = qtilde(p).value;
    for (double a : {0.61, 1.2, 6.0}) {
        const double b = static_cast<double>(b_of_a_root(a, p));
        CHECK(std::abs(b * q - a) <= 1e-8 * a);
    }
    CHECK(static_cast<double>(b_of_a_root(1e-8 * p.m(), p)) == doctest::Approx(b0(p)).epsilon(1e-3));
    double prev = 0.0;
    for (int i = 0; i < 30; ++i) {
        const double a = 1e-3 * p.m() * std::pow(1e4, i / 29.0);
        const double b = static_cast<double>(b_of_a_root(a, p));
        CHECK(b > prev);
        prev = b;
    }
    CHECK_THROWS_AS(solve_b_of_a(0.3, table(0.3)), Error);
    CHECK_THROWS_AS(solve_b_of_a(0.3, table(0.255)), Error);
}

TEST_CASE("U2 smooth fit and ODE") {
    const ModelParams p = table();
    const Resolvent res(p);
    for (double a : {0.27, 0.45}) {
        const LegisBestResponse br = solve_b_of_a(a, p, res);
        const double b = br.b_of_a();
        CHECK(std::abs(br.derivative(b * (1 - 1e-12)) - p.kappa()) <= 1e-6);
        CHECK(std::abs(br.second_derivative(b * (1 - 1e-12))) <= 1e-6);
        CHECK(std::abs(br.derivative(a * (1 + 1e-12))) <= 1e-6);
        const double hb = 1e-6 * b;
        CHECK(std::abs((br.value(b) - br.value(b - hb)) / hb - p.kappa()) <= 1e-5);
        const double ha = 1e-6 * a;
        CHECK(std::abs((br.value(a + ha) - br.value(a)) / ha) <= 1e-5);

        const double s2 = p.sigma() * p.sigma();
        for (int i = 1; i < 10; ++i) {
            const double x = a + (b - a) * i / 10.0;
            if (std::abs(x - p.m()) < 1e-3) continue;
            const double step = 1e-4 * std::min(x, std::abs(x - p.m()));
            const double u0 = br.value(x), up = br.value(x + step), um = br.value(x - step);
            const double d1 = (up - um) / (2 * step), d2 = (up - 2 * u0 + um) / (step * step);
            const double res_ode = 0.5 * s2 * x * x * d2 + p.net_rate() * x * d1 - p.lambda() * u0
                                 + p.alpha() * std::max(x - p.m(), 0.0);
            CHECK(std::abs(res_ode) <= 1e-6 * std::max(1.0, x));
            CHECK(br.derivative(x) >= -1e-9);
            CHECK(br.derivative(x) <= p.kappa() + 1e-9);
        }
    }
    CHECK(U2(0.5, 0.3, p) == doctest::Approx(solve_b_of_a(0.3, p).value(0.5)).epsilon(1e-14));
}

TEST_CASE("no-ceiling legislator value") {
    const ModelParams p = table(0.3);
    const double a = 0.256;
    const LegisNoCeilingSolution sol(a, p);
    CHECK(std::abs(sol.derivative(a * (1 + 1e-12))) <= 1e-6);
    for (int i = 1; i <= 50; ++i) {
        const double x = a + (50 * p.m() - a) * i / 50.0;
        CHECK(sol.derivative(x) < p.kappa());
    }
    CHECK(Vbar2(0.4, a, p) == doctest::Approx(sol.value(0.4)).epsilon(1e-14));

    SimConfig sim;
    sim.x0 = 0.5;
    sim.a = a;
    sim.n_paths = 20000;
    sim.crn_tag = "vbar2-unit";
    const SimEstimate est = simulate_cost_pair(sim, p).leg;
    const double z = (est.mean - sol.value(0.5)) / est.std_error;
    MESSAGE("Vbar2=" << sol.value(0.5) << " mc=" << est.mean << " z=" << z);
    CHECK(std::abs(z) <= 3.0);
}

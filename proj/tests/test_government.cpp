#include <doctest.h>

#include <cmath>
#include <vector>

#include "debtgame/government.hpp"
#include "oracles.hpp"

using namespace debtgame;

namespace {

ModelParams table() { return validate_params(oracle::table()); }

double abar_oracle(const RawParams& p) {
    const auto [d1, d2] = oracle::roots(p, p.rho);
    const double margin = p.rho - 2 * (p.r - p.g) - p.sigma * p.sigma;
    return static_cast<double>((1 - d2) * p.c2 * margin / (2 - d2));
}

}  // namespace

TEST_CASE("F on the diagonal") {
    const ModelParams p = table();
    const RootPair d = char_roots(p, p.rho());
    const double expected = (d.pos - d.neg) * (p.c1() - p.c2()) * p.quad_margin();
    for (double b : {0.01, 0.6, 5.0, 600.0}) {
        CHECK(F(b, b, p) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(expected > 0.0);
}

TEST_CASE("F diverges to minus infinity as a vanishes") {
    const ModelParams p = table();
    double prev = F(0.1, 1.0, p);
    for (double a : {1e-2, 1e-4, 1e-8}) {
        const double v = F(a, 1.0, p);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < -1e10);
}

TEST_CASE("dF/da against central differences and its sign") {
    const ModelParams p = table();
    const double at = a_tilde(p);
    for (double b : {0.3, 1.0, 4.0}) {
        const double edge = std::min(at, b);
        for (double frac : {0.2, 0.5, 0.9, 1.05, 1.3}) {
            const double a = edge * frac;
            if (a >= b) continue;
            const double h = 1e-6 * a;
            const double fd = (F(a + h, b, p) - F(a - h, b, p)) / (2 * h);
            const double exact = dF_da(a, b, p);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
            if (frac < 1.0) CHECK(exact > 0.0);
            if (frac > 1.0) CHECK(exact < 0.0);
        }
        CHECK(std::abs(dF_da(b, b, p)) <= 1e-10 * std::abs(F(b, b, p)));
    }
    CHECK_THROWS_AS(F(1.0, 0.5, p), Error);
    CHECK_THROWS_AS(F(0.0, 0.5, p), Error);
}

TEST_CASE("a(b) agrees with the shooting oracle") {
    const ModelParams p = table();
    for (double b : {0.01, 0.3, 1.0, 2.5, 40.0}) {
        const GovBestResponse br = solve_a_of_b(b, p);
        const double ref = static_cast<double>(oracle::a_of_b(p.raw(), b));
        CHECK(br.a_of_b() == doctest::Approx(ref).epsilon(1e-12));
        CHECK(br.a_of_b() > 0.0);
        CHECK(br.a_of_b() < std::min(b, a_tilde(p)));
        CHECK(br.dF_da() > 0.0);
        CHECK(br.residual() <= 1e-12 * F(b, b, p));
    }
}

TEST_CASE("a(b) limits") {
    const ModelParams p = table();
    const double a_bar = abar(p).a_bar();
    CHECK(std::abs(solve_a_of_b(1e4 * p.m(), p).a_of_b() - a_bar) <= 1e-3 * a_bar);
    CHECK(solve_a_of_b(1e-6 * p.m(), p).a_of_b() <= 1e-4 * p.m());
    CHECK_THROWS_AS(solve_a_of_b(0.0, p), Error);
    CHECK_THROWS_AS(solve_a_of_b(-1.0, p), Error);
}

TEST_CASE("closed-form no-ceiling threshold") {
    const ModelParams p = table();
    const GovNoCeilingSolution sol = abar(p);
    CHECK(sol.a_bar() == doctest::Approx(abar_oracle(p.raw())).epsilon(1e-14));
    CHECK(sol.a_bar() == doctest::Approx(4.5161 * 1.25 * 0.25 / 5.5161).epsilon(1e-4));
    CHECK(sol.a_bar() < a_tilde(p));
    CHECK(sol.derivative(sol.a_bar()) == doctest::Approx(p.c2()).epsilon(1e-12));
    const double x = sol.a_bar() * (1 + 1e-12);
    CHECK(std::abs(sol.derivative(x) - p.c2()) <= 1e-8);
    CHECK(std::abs(sol.second_derivative(x)) <= 1e-8);
    const double big = 1e3;
    CHECK(std::abs(sol.value(big) - big * big / (2 * p.quad_margin())) <= 1e-6);
}

TEST_CASE("a_bar stays below a_tilde across parameters") {
    for (double rho : {0.06, 0.1, 0.3, 1.0}) {
        for (double sigma : {0.05, 0.2}) {
            RawParams raw = oracle::table();
            raw.rho = rho;
            raw.sigma = sigma;
            if (rho <= 2 * (raw.r - raw.g) + sigma * sigma) continue;
            const ModelParams p = validate_params(raw);
            CHECK(abar(p).a_bar() < a_tilde(p));
        }
    }
}

TEST_CASE("U1 smooth fit and ODE") {
    const ModelParams p = table();
    for (double b : {0.5, 1.0, 3.0}) {
        const GovBestResponse br = solve_a_of_b(b, p);
        const double a = br.a_of_b();
        const double h = 1e-7 * a;
        const double below = (br.value(a) - br.value(a - h)) / h;
        const double above = (br.value(a + h) - br.value(a)) / h;
        CHECK(std::abs(below - p.c2()) <= 1e-6);
        CHECK(std::abs(above - p.c2()) <= 1e-6);
        CHECK(std::abs(br.derivative(a * (1 + 1e-12)) - p.c2()) <= 1e-8);
        CHECK(std::abs(br.derivative(b * (1 - 1e-12)) - p.c1()) <= 1e-8);
        const double hb = 1e-7 * b;
        CHECK(std::abs((br.value(b) - br.value(b - hb)) / hb - p.c1()) <= 1e-5);

        const double s2 = p.sigma() * p.sigma();
        for (int i = 1; i < 10; ++i) {
            const double x = a + (b - a) * i / 10.0;
            const double step = 1e-4 * x;
            const double u0 = br.value(x), up = br.value(x + step), um = br.value(x - step);
            const double d1 = (up - um) / (2 * step), d2 = (up - 2 * u0 + um) / (step * step);
            const double res = 0.5 * s2 * x * x * d2 + p.net_rate() * x * d1 - p.rho() * u0 + 0.5 * x * x;
            CHECK(std::abs(res) <= 1e-6 * std::max(1.0, x * x));
            CHECK(br.derivative(x) >= p.c2() - 1e-12);
            // the upper bound is only a property of ceilings up to b*
            if (b < 0.7) CHECK(br.derivative(x) <= p.c1() + 1e-12);
        }
    }
    CHECK(U1(0.4, 1.0, p) == solve_a_of_b(1.0, p).value(0.4));
}

TEST_CASE("peak of a(b)") {
    const ModelParams p = table();
    const HatB peak = hat_b_diagnostic(p);
    CHECK(peak.b_hat > 0.0);
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(peak.b_hat * std::pow(10.0, -2.0 + 4.0 * i / 60));
    double prev = 0.0;
    for (double b : grid) {
        const double a = solve_a_of_b(b, p).a_of_b();
        CHECK(a <= peak.a_hat * (1 + 1e-12));
        if (b < peak.b_hat * 0.99) CHECK(a > prev);
        if (b > peak.b_hat * 1.01 && prev > 0.0) CHECK(a < prev);
        prev = a;
    }
    // concave on (0, b_hat)
    for (int i = 0; i + 2 <= 30; ++i) {
        const double b1 = peak.b_hat * std::pow(10.0, -2.0 + 2.0 * i / 30);
        const double b2 = peak.b_hat * std::pow(10.0, -2.0 + 2.0 * (i + 2) / 30);
        const double mid = solve_a_of_b(0.5 * (b1 + b2), p).a_of_b();
        CHECK(mid >= 0.5 * (solve_a_of_b(b1, p).a_of_b() + solve_a_of_b(b2, p).a_of_b()));
    }
}

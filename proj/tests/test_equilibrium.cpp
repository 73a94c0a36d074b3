#include <doctest.h>

#include <cmath>

#include "debtgame/equilibrium.hpp"
#include "oracles.hpp"

using namespace debtgame;

namespace {

ModelParams table(double lambda = 0.1) { return validate_params(oracle::table(lambda)); }

/// Nash pair from the shooting oracles: root of b -> u'(a(b)) on (b0, inf).
std::pair<double, double> nash_oracle(const RawParams& p) {
    const oracle::Resolvent h(p);
    auto psi = [&](oracle::ld b) { return oracle::leg_shoot(p, h, oracle::a_of_b(p, b), b); };
    oracle::ld lo = p.m;
    while (psi(lo) <= 0) lo *= 1.01L;
    oracle::ld hi = lo * 2;
    while (psi(hi) > 0) hi *= 2;
    const oracle::ld b = oracle::bisect(psi, lo, hi, 120);
    return {static_cast<double>(oracle::a_of_b(p, b)), static_cast<double>(b)};
}

}  // namespace

TEST_CASE("ceiling equilibrium at the reference parameters") {
    const ModelParams p = table();
    const NashOutcome n = solve_nash(p);
    REQUIRE(n.tag == NashTag::Ceiling);
    const auto [a_ref, b_ref] = nash_oracle(p.raw());
    CHECK(n.a_star == doctest::Approx(a_ref).epsilon(1e-10));
    CHECK(*n.b_star == doctest::Approx(b_ref).epsilon(1e-10));
    CHECK(n.a_star < *n.b_star);
    CHECK(*n.b_star > *n.b0);
    CHECK(*n.F_resid <= 1e-9 * *n.F_scale);
    CHECK(*n.G_resid <= 1e-9 * p.kappa());
    CHECK(std::abs(*n.b_of_a_star - *n.b_star) <= 1e-8 * *n.b_star);
    CHECK(std::abs(*n.a_of_b_star - n.a_star) <= 1e-8 * n.a_star);
    CHECK(n.a_bar == abar(p).a_bar());
    CHECK(n.regime.tag == RegimeTag::LegislatorIntervenes);
    CHECK(*n.psi_lo > 0.0);
    CHECK(*n.psi_hi < 0.0);
}

TEST_CASE("equilibrium values satisfy both boundary conditions") {
    const ModelParams p = table();
    const NashOutcome n = solve_nash(p);
    const double a = n.a_star, b = *n.b_star;
    CHECK(n.gov_value(b + 1.0) - n.gov_value(b) == doctest::Approx(p.c1()).epsilon(1e-12));
    CHECK(n.leg_value(b + 1.0) - n.leg_value(b) == doctest::Approx(p.kappa()).epsilon(1e-12));
    CHECK(n.leg_value(0.5 * a) == doctest::Approx(n.leg_value(a)).epsilon(1e-14));
    CHECK(n.gov_value(a) - n.gov_value(0.5 * a) == doctest::Approx(0.5 * a * p.c2()).epsilon(1e-12));
}

TEST_CASE("best-response iteration reaches the same point") {
    const ModelParams p = table();
    const NashOutcome n = solve_nash(p);
    const IterationResult it = best_response_iteration(p, abar(p).a_bar());
    CHECK(it.converged);
    CHECK(std::abs(it.a - n.a_star) <= 1e-6 * n.a_star);
    CHECK(std::abs(it.b - *n.b_star) <= 1e-6 * *n.b_star);
}

TEST_CASE("no-ceiling and boundary regimes") {
    const ModelParams p = table(0.3);
    const NashOutcome n = solve_nash(p);
    CHECK(n.tag == NashTag::NoCeiling);
    CHECK(n.a_star == abar(p).a_bar());
    CHECK(n.a_star == doctest::Approx(0.2558).epsilon(1e-3));
    CHECK_FALSE(n.b_star);
    CHECK_FALSE(n.b0);
    CHECK(n.gov_value(0.4) == doctest::Approx(abar(p).value(0.4)).epsilon(1e-14));
    try {
        solve_nash(table(0.255));
        FAIL("expected BoundaryRegime");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BoundaryRegime);
    }
}

TEST_CASE("cap and scan settings") {
    NashSettings s;
    s.cap_factor = 2.0;
    s.build_values = false;
    try {
        solve_nash(table(0.25), s);
        FAIL("expected CapExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CapExceeded);
    }
    s.scan_points = 1;
    CHECK_THROWS_AS(solve_nash(table(), s), Error);
}

TEST_CASE("lambda diagnostic") {
    const std::vector<double> lambdas{0.1, 0.13, 0.2, 0.25, 0.2549, 0.3, 0.255};
    const LambdaLimitTable t = lambda_limit_diagnostic(oracle::table(), lambdas);
    REQUIRE(t.rows.size() == lambdas.size());
    CHECK(t.rows[1].status == "ok");
    CHECK(*t.rows[1].F_resid <= 1e-9);
    CHECK(*t.rows[1].G_resid <= 1e-9);
    CHECK(t.rows[5].status == "ok");
    CHECK_FALSE(t.rows[5].b_star);
    CHECK(t.rows[6].status == "BoundaryRegime");
    for (int i = 0; i + 1 < 5; ++i) {
        CHECK(*t.rows[i + 1].b_star > *t.rows[i].b_star);
        CHECK(*t.rows[i + 1].a_gap < *t.rows[i].a_gap);
    }
}

TEST_CASE("deviation certificate on a short run") {
    const ModelParams p = table();
    const NashOutcome n = solve_nash(p);
    SimConfig sim;
    sim.n_paths = 2000;
    sim.horizon = 15.0;
    sim.dt = 2e-3;
    const DeviationReport zero = deviation_certificate(p, n, {0.0}, sim);
    REQUIRE(zero.rows.size() == 2);
    for (const auto& row : zero.rows) {
        CHECK(row.difference.mean == 0.0);
        CHECK(row.passed);
    }
    const DeviationReport rep = deviation_certificate(p, n, {-0.1, 0.1}, sim);
    CHECK(rep.rows.size() == 4);
    CHECK(rep.rows[0].player == "government");
    CHECK(rep.rows[3].player == "legislator");
    CHECK(rep.rows[3].threshold == doctest::Approx(*n.b_star * 1.1));
    CHECK_THROWS_AS(deviation_certificate(p, solve_nash(table(0.3)), {0.1}, sim), Error);
}

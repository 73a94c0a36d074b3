#include <doctest.h>

#include <cmath>

#include "debtgame/model.hpp"
#include "oracles.hpp"

using namespace debtgame;

namespace {

bool violates(const RawParams& raw, const std::string& name) {
    try {
        validate_params(raw);
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) {
            if (v.name == name) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("reference parameters validate") {
    const RawParams raw = reference_params();
    CHECK_NOTHROW(validate_params(raw));
    CHECK(raw.lambda == 0.1);
    CHECK(raw.m == 0.6);
}

TEST_CASE("each assumption is reported by name") {
    RawParams raw = reference_params();
    raw.c2 = 2.5;
    CHECK(violates(raw, "c1>c2"));

    raw = reference_params();
    raw.rho = 0.04;
    CHECK(violates(raw, "rho>2(r-g)+sigma^2"));

    raw = reference_params();
    raw.lambda = 0.005;
    CHECK(violates(raw, "lambda>r-g"));

    raw = reference_params();
    raw.sigma = 0.0;
    raw.m = -1.0;
    CHECK(violates(raw, "sigma>0"));
    CHECK(violates(raw, "m>0"));
}

TEST_CASE("all violations are listed together") {
    RawParams raw = reference_params();
    raw.c2 = 3.0;
    raw.kappa = -1.0;
    try {
        validate_params(raw);
        FAIL("expected a violation");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ErrorKind::AssumptionViolation);
        CHECK(e.violations().size() == 2);
    }
}

TEST_CASE("non-finite inputs are rejected, never clamped") {
    RawParams raw = reference_params();
    raw.alpha = std::nan("");
    try {
        validate_params(raw);
        FAIL("expected NonFinite");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ErrorKind::NonFinite);
    }
    raw = reference_params();
    raw.r = INFINITY;
    CHECK_THROWS_AS(validate_params(raw), ValidationError);
}

TEST_CASE("characteristic roots of the government and legislator") {
    const ModelParams p = validate_params(reference_params());
    const RootPair d = char_roots(p, p.rho());
    const auto [o1, o2] = oracle::roots(p.raw(), p.rho());
    CHECK(d.pos == doctest::Approx(static_cast<double>(o1)).epsilon(1e-14));
    CHECK(d.neg == doctest::Approx(static_cast<double>(o2)).epsilon(1e-14));
    CHECK(d.pos == doctest::Approx(4.266).epsilon(1e-4));
    CHECK(d.neg == doctest::Approx(-3.516).epsilon(1e-4));
    CHECK(d.pos > 2.0);

    const RootPair t = char_roots(p, p.lambda());
    CHECK(t.pos > 1.0);
    CHECK(t.neg < 0.0);
    CHECK(t.neg == doctest::Approx(-1.8923).epsilon(1e-4));
}

TEST_CASE("roots satisfy the quadratic and Vieta's identities") {
    for (double sigma : {0.05, 0.2, 0.6}) {
        for (double rate : {0.051, 0.1, 0.3, 2.0}) {
            RawParams raw = reference_params();
            raw.sigma = sigma;
            raw.rho = 2 * (raw.r - raw.g) + sigma * sigma + rate;
            raw.lambda = rate;
            const ModelParams p = validate_params(raw);
            for (double disc : {p.rho(), p.lambda()}) {
                const RootPair rt = char_roots(p, disc);
                const double s2 = sigma * sigma;
                CHECK(std::abs(char_residual(p, disc, rt.pos)) <= 1e-12 * disc);
                CHECK(std::abs(char_residual(p, disc, rt.neg)) <= 1e-12 * disc);
                CHECK(rt.pos * rt.neg == doctest::Approx(-2 * disc / s2).epsilon(1e-13));
                CHECK(rt.pos + rt.neg == doctest::Approx(1 - 2 * p.net_rate() / s2).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("regime classification") {
    RawParams raw = reference_params();
    CHECK(regime_boundary(raw) == doctest::Approx(0.255));
    CHECK(classify_regime(validate_params(raw)).tag == RegimeTag::LegislatorIntervenes);
    raw.lambda = 0.3;
    CHECK(classify_regime(validate_params(raw)).tag == RegimeTag::LegislatorAbstains);
    raw.lambda = 0.255;
    CHECK(classify_regime(validate_params(raw)).tag == RegimeTag::Boundary);

    // flipping lambda across the boundary flips the tag
    for (double off : {1e-9, 1e-4, 0.05}) {
        raw.lambda = 0.255 + off;
        const Regime up = classify_regime(validate_params(raw));
        raw.lambda = 0.255 - off;
        const Regime down = classify_regime(validate_params(raw));
        CHECK(up.tag == RegimeTag::LegislatorAbstains);
        CHECK(down.tag == RegimeTag::LegislatorIntervenes);
        CHECK(up.margin > 0.0);
        CHECK(down.margin < 0.0);
    }
}

TEST_CASE("parameters by name") {
    RawParams raw = reference_params();
    set_param(raw, "lambda", 0.2);
    CHECK(get_param(raw, "lambda") == 0.2);
    CHECK(get_param(raw, "c1") == 2.0);
    CHECK_THROWS_AS(set_param(raw, "lamda", 0.2), Error);
    CHECK_THROWS_AS(get_param(raw, "beta"), Error);
}

TEST_CASE("hash separates parameter sets") {
    RawParams raw = reference_params();
    const auto h1 = validate_params(raw).hash();
    CHECK(h1 == validate_params(raw).hash());
    raw.lambda = 0.11;
    CHECK(h1 != validate_params(raw).hash());
}

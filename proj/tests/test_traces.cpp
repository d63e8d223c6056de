#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helesim/traces.hpp"
#include "support/test_fields.hpp"

using namespace helesim;
using helesim::testing::rel_l2;

TEST_CASE("constant surface has trivial traces") {
    Grid g(64);
    Field h = Field::constant(g, 0.8);
    Traces tr = compute_traces(h);
    CHECK(tr.B.sup_abs() < 1e-12);
    CHECK(tr.V[0].sup_abs() < 1e-12);
    CHECK(tr.gamma.sup_abs() < 1e-12);
    CHECK(tr.W[0].sup_abs() < 1e-12);
    CHECK(tr.Z.sup_abs() < 1e-12);
    CHECK(tr.Y.sup_abs() < 1e-12);
    CHECK(tr.a.min_value() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tr.lambda_scale == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("V equals (1-B) grad h by construction") {
    Grid g(128);
    std::mt19937_64 rng(43);
    Field h = testing::random_surface(g, rng, 0.4);
    Traces tr = compute_traces(h);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(tr.V[0][i] == tr.a[i] * tr.grad_h[0][i]);
}

TEST_CASE("B agrees with the strip oracle's interior vertical derivative") {
    Grid g(128);
    Field h = Field::sample(g, [](double x) { return 0.2 * std::cos(x); });
    DnoExpansion cfg;
    cfg.max_order = 12;
    Traces tr = compute_traces(h, cfg);

    StripOracle ocfg;
    ocfg.depth = 8.0;
    ocfg.vertical_cells = 256;
    OracleSolution sol = dno_oracle_solve(h, h, ocfg);
    CHECK(rel_l2(tr.B, sol.surface_dy()) < 1e-3);
}

TEST_CASE("identity residuals vanish for constants") {
    Grid g(64);
    Field h = Field::constant(g, -0.4);
    Traces tr = compute_traces(h);
    ResidualReport rep = identity_residuals(h, tr);
    for (const auto& [name, norms] : rep.residuals) {
        CAPTURE(name);
        CHECK(norms.l2 < 1e-13);
        CHECK(norms.linf < 1e-13);
    }
    CHECK(rep.rellich < 1e-13);
    CHECK(rep.a_positive);
    CHECK(rep.gamma_nonpositive);
}

TEST_CASE("identity residuals are spectrally small and refine") {
    Grid g(256);
    Field h = Field::sample(g, [](double x) { return 0.2 * std::cos(x); });
    DnoExpansion hi;
    hi.max_order = 12;
    Traces tr = compute_traces(h, hi);
    ResidualReport rep = identity_residuals(h, tr, hi);
    const double scale = l2_norm(h);
    double worst_hi = 0.0;
    for (const auto& [name, norms] : rep.residuals) {
        CAPTURE(name);
        CHECK(norms.l2 < 1e-6 * scale);
        worst_hi = std::max(worst_hi, norms.l2);
    }
    CHECK(rep.rellich < 1e-8);
    CHECK(rep.max_gamma <= 1e-6 * rep.gamma_scale);

    // truncation order dominates the residuals: lowering it must hurt
    DnoExpansion lo;
    lo.max_order = 6;
    Traces trlo = compute_traces(h, lo);
    ResidualReport replo = identity_residuals(h, trlo, lo);
    double worst_lo = 0.0;
    for (const auto& [name, norms] : replo.residuals)
        worst_lo = std::max(worst_lo, norms.l2);
    CHECK(worst_hi < worst_lo);
}

TEST_CASE("two-dimensional identity residuals") {
    Grid g(32, 32);
    Field h = Field::sample(g, [](double x, double y) {
        return 0.05 * std::cos(x) + 0.04 * std::sin(y);
    });
    DnoExpansion cfg;
    cfg.max_order = 8;
    Traces tr = compute_traces(h, cfg);
    ResidualReport rep = identity_residuals(h, tr, cfg);
    REQUIRE(rep.residuals.count("R2_1") == 1);
    REQUIRE(rep.residuals.count("R2_2") == 1);
    const double scale = l2_norm(h);
    for (const auto& [name, norms] : rep.residuals) {
        CAPTURE(name);
        CHECK(norms.l2 < 1e-6 * scale);
    }
    CHECK(rep.rellich < 1e-8);
}

TEST_CASE("Rayleigh-Taylor violation raises a degenerate-state error") {
    Grid g(64);
    // with the flat-operator truncation G(h)h = |D|h = 1.2 cos x, so
    // B > 1 near x = 0 and a < 0 there
    Field h = Field::sample(g, [](double x) { return 1.2 * std::cos(x); });
    DnoExpansion cfg;
    cfg.max_order = 0;
    cfg.slope_bound = 10.0;
    CHECK_THROWS_AS(compute_traces(h, cfg), DegenerateStateError);
}

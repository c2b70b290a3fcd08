#include <doctest.h>

#include <cmath>
#include <random>

#include "premia/equilibrium.hpp"
#include "test_util.hpp"

using premia::ActionKind;
using premia::classify;
using premia::EquilibriumReport;
using premia::MarketRegime;
using premia::MarketState;
using premia::RiskTolerance;
using premia::run_equilibrium;

TEST_CASE("an additive market converges at round zero with no actions") {
    const EquilibriumReport report =
        run_equilibrium(testutil::premium_state(4.0, 4.0, 8.0), 1e-9, 200);
    CHECK(report.converged);
    CHECK(report.rounds_used == 0);
    REQUIRE(report.trace.size() == 1);
    CHECK(report.trace[0].action.kind == ActionKind::NoAction);
    CHECK(report.final_delta == 0.0);
}

TEST_CASE("an underpriced market resolves with exactly one split") {
    const EquilibriumReport report =
        run_equilibrium(testutil::premium_state(4.0, 4.0, 7.0), 1e-9, 200);
    CHECK(report.converged);
    CHECK(report.rounds_used == 1);
    REQUIRE(report.trace.size() == 2);
    CHECK(report.trace[0].delta == -1.0);
    CHECK(report.trace[0].action.kind == ActionKind::SplitOffer);
    CHECK(report.trace[0].action.premium1 == 3.5);
    CHECK(report.trace[0].action.premium2 == 3.5);
    CHECK(report.trace[1].action.kind == ActionKind::NoAction);
    CHECK(report.final_delta == 0.0);
    CHECK(report.final_p == 7.0);
    CHECK(report.final_p1 == 3.5);
    CHECK(report.final_p2 == 3.5);
}

TEST_CASE("an overpriced market halves its gap every coalition round") {
    const EquilibriumReport report =
        run_equilibrium(testutil::premium_state(4.0, 4.0, 10.0), 1e-3, 200);
    CHECK(report.converged);
    CHECK(report.rounds_used == 11);
    REQUIRE(report.trace.size() == 12);
    for (int k = 0; k <= 11; ++k) {
        CHECK(report.trace[static_cast<std::size_t>(k)].delta == 2.0 / std::pow(2.0, k));
        CHECK(report.trace[static_cast<std::size_t>(k)].action.kind ==
              (k < 11 ? ActionKind::CoalitionOffer : ActionKind::NoAction));
    }
    CHECK(report.final_delta == 2.0 / 2048.0);
}

TEST_CASE("hitting the round limit reports non-convergence without throwing") {
    const EquilibriumReport report =
        run_equilibrium(testutil::premium_state(4.0, 4.0, 10.0), 1e-9, 3);
    CHECK_FALSE(report.converged);
    CHECK(report.rounds_used == 3);
    REQUIRE(report.trace.size() == 4);
    CHECK(report.trace.back().action.kind == ActionKind::NoAction);
    CHECK(report.final_delta == 0.25);
}

TEST_CASE("coalition rounds contract the mispricing geometrically") {
    std::mt19937_64 rng(303808);
    std::uniform_real_distribution<double> premium(0.5, 400.0);
    std::uniform_real_distribution<double> markup(1.05, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double p1 = premium(rng);
        const double p2 = premium(rng);
        const double p = (p1 + p2) * markup(rng);
        const EquilibriumReport report =
            run_equilibrium(testutil::premium_state(p1, p2, p), 1e-6, 200);
        CHECK(report.converged);
        for (std::size_t k = 0; k + 1 < report.trace.size(); ++k) {
            CHECK(std::abs(report.trace[k + 1].delta - report.trace[k].delta / 2.0) <= 1e-12);
        }
    }
}

TEST_CASE("rounds used respect the termination bound") {
    std::mt19937_64 rng(99020);
    std::uniform_real_distribution<double> premium(0.5, 100.0);
    std::uniform_real_distribution<double> factor(0.2, 3.0);
    for (double tol : {1e-3, 1e-6, 1e-9}) {
        for (int trial = 0; trial < 100; ++trial) {
            const double p1 = premium(rng);
            const double p2 = premium(rng);
            const double p = (p1 + p2) * factor(rng);
            const EquilibriumReport report =
                run_equilibrium(testutil::premium_state(p1, p2, p), tol, 500);
            REQUIRE(report.converged);
            const double delta0 = std::abs(report.trace[0].delta);
            const int bound =
                1 + static_cast<int>(std::ceil(std::log2(std::max(delta0, tol) / tol)));
            CHECK(report.rounds_used <= bound);
        }
    }
}

TEST_CASE("the purchase feasibility diagnostic is attached only on request") {
    const MarketState state = testutil::premium_state(4.0, 4.0, 8.0);
    CHECK_FALSE(run_equilibrium(state, 1e-9, 10).purchase_feasible.has_value());
    const EquilibriumReport report =
        run_equilibrium(state, 1e-9, 10, RiskTolerance(1.0));
    REQUIRE(report.purchase_feasible.has_value());
    // Valuation of the small bernoulli pair is far below a premium of 8.
    CHECK_FALSE(*report.purchase_feasible);
}

TEST_CASE("additive price vectors are fixed points; non-additive ones always act") {
    std::mt19937_64 rng(112233);
    std::uniform_real_distribution<double> premium(0.5, 100.0);
    std::uniform_real_distribution<double> off(0.05, 0.95);
    for (int trial = 0; trial < 200; ++trial) {
        const double p1 = premium(rng);
        const double p2 = premium(rng);
        const MarketState additive = testutil::premium_state(p1, p2, p1 + p2);
        const EquilibriumReport report = run_equilibrium(additive, 1e-9, 200);
        CHECK(report.converged);
        CHECK(report.rounds_used == 0);

        const double shift = off(rng);
        const double p_low = (p1 + p2) * shift;
        CHECK(classify(testutil::premium_state(p1, p2, p_low), 1e-9) !=
              MarketRegime::Equilibrium);
        const double p_high = (p1 + p2) * (1.0 + shift);
        CHECK(classify(testutil::premium_state(p1, p2, p_high), 1e-9) !=
              MarketRegime::Equilibrium);
    }
}

TEST_CASE("run_equilibrium validates its controls") {
    const MarketState state = testutil::premium_state(4.0, 4.0, 8.0);
    CHECK_THROWS_AS(run_equilibrium(state, 0.0, 10), premia::PreconditionError);
    CHECK_THROWS_AS(run_equilibrium(state, 1e-9, -1), premia::PreconditionError);
}

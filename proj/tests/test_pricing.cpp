#include <doctest.h>

#include <cmath>
#include <random>

#include "premia/pricing.hpp"
#include "test_util.hpp"

using premia::DiscreteDist;
using premia::disutility;
using premia::indifference_premium;
using premia::InsurerProfile;
using premia::quote_premium;
using premia::RiskTolerance;

namespace {
const double kRhoGrid[] = {0.1, 0.5, 1.0, 5.0, 10.0, 100.0};
}

TEST_CASE("risk tolerance must be positive and finite") {
    CHECK_THROWS_AS(RiskTolerance(0.0), premia::PreconditionError);
    CHECK_THROWS_AS(RiskTolerance(-1.0), premia::PreconditionError);
    CHECK_THROWS_AS(RiskTolerance(std::nan("")), premia::PreconditionError);
    CHECK(RiskTolerance(2.5).value() == 2.5);
}

TEST_CASE("disutility of the worked examples") {
    for (double rho : kRhoGrid) {
        CHECK(disutility(0.0, RiskTolerance(rho)) == 0.0);
        // U(rho) = rho * (e - 1)
        CHECK(disutility(rho, RiskTolerance(rho)) ==
              doctest::Approx(rho * 1.718281828459045).epsilon(1e-14));
    }
    CHECK_THROWS_AS(disutility(-0.5, RiskTolerance(1.0)), premia::PreconditionError);
    CHECK_THROWS_AS(disutility(1e6, RiskTolerance(1.0)), premia::NumericRangeError);
}

TEST_CASE("disutility slope matches the analytic derivative") {
    const double h = 1e-6;
    for (double rho : {0.5, 1.0, 5.0}) {
        for (double l : {0.25, 0.5, 1.0, 2.0}) {
            const RiskTolerance tol(rho);
            const double slope = (disutility(l + h, tol) - disutility(l - h, tol)) / (2.0 * h);
            const double analytic = std::exp(l / rho);
            CHECK(std::abs(slope - analytic) <= 1e-5 * analytic);
        }
    }
}

TEST_CASE("disutility is strictly increasing and convex") {
    const RiskTolerance rho(2.0);
    double previous = disutility(0.0, rho);
    double previous_step = 0.0;
    for (double l = 0.5; l <= 5.0; l += 0.5) {
        const double value = disutility(l, rho);
        CHECK(value > previous);
        const double step = value - previous;
        CHECK(step > previous_step);
        previous = value;
        previous_step = step;
    }
}

TEST_CASE("indifference premium of a point mass is the loss itself") {
    for (double loss : {0.0, 1.0, 17.5, 400.0}) {
        for (double rho : kRhoGrid) {
            CHECK(indifference_premium(DiscreteDist::point_mass(loss), RiskTolerance(rho)) ==
                  loss);
        }
    }
}

TEST_CASE("indifference premium matches the closed-form oracle") {
    const DiscreteDist d({0.0, 1.0}, {0.9, 0.1});
    // rho * ln E[exp(X / rho)] evaluated directly at rho = 1.
    const double oracle = std::log(0.9 + 0.1 * std::exp(1.0));
    const double premium = indifference_premium(d, RiskTolerance(1.0));
    CHECK(std::abs(premium - oracle) <= 1e-12);
    CHECK(premium == doctest::Approx(0.1585650787404291).epsilon(1e-13));
}

TEST_CASE("indifference premium is additive over independent risks") {
    const DiscreteDist d1 = DiscreteDist::bernoulli(0.1, 1.0);
    const DiscreteDist d2 = DiscreteDist::bernoulli(0.2, 3.0);
    for (double rho : kRhoGrid) {
        const RiskTolerance tol(rho);
        const double joint = indifference_premium(convolve(d1, d2), tol);
        const double split = indifference_premium(d1, tol) + indifference_premium(d2, tol);
        CHECK(std::abs(joint - split) <= 1e-9 * (1.0 + split));
    }
}

TEST_CASE("quote premium composes loading and admin cost") {
    const DiscreteDist d({0.0, 1.0}, {0.9, 0.1});
    const InsurerProfile flat{"flat", RiskTolerance(1.0), 0.0, 0.0};
    CHECK(quote_premium(flat, d) == indifference_premium(d, RiskTolerance(1.0)));

    const InsurerProfile loaded{"loaded", RiskTolerance(2.0), 0.1, 0.0};
    CHECK(quote_premium(loaded, DiscreteDist::point_mass(5.0)) ==
          doctest::Approx(5.5).epsilon(1e-15));

    const InsurerProfile full{"full", RiskTolerance(1.0), 0.05, 0.01};
    const double oracle = 1.05 * std::log(0.9 + 0.1 * std::exp(1.0)) + 0.01;
    CHECK(std::abs(quote_premium(full, d) - oracle) <= 1e-12);
    CHECK(quote_premium(full, d) == doctest::Approx(0.17649333267745056).epsilon(1e-13));
}

TEST_CASE("pricing properties over random distributions") {
    std::mt19937_64 rng(991177);

    SUBCASE("additivity across the tolerance grid") {
        for (int trial = 0; trial < 100; ++trial) {
            const DiscreteDist a = testutil::random_dist(rng);
            const DiscreteDist b = testutil::random_dist(rng);
            const DiscreteDist joint = convolve(a, b);
            for (double rho : kRhoGrid) {
                const RiskTolerance tol(rho);
                const double split = indifference_premium(a, tol) + indifference_premium(b, tol);
                CHECK(std::abs(indifference_premium(joint, tol) - split) <=
                      1e-9 * (1.0 + split));
            }
        }
    }
    SUBCASE("premium never sits below the expected loss") {
        for (int trial = 0; trial < 200; ++trial) {
            const DiscreteDist d = testutil::random_dist(rng);
            for (double rho : kRhoGrid) {
                CHECK(indifference_premium(d, RiskTolerance(rho)) >=
                      expectation(d) - 1e-12);
            }
        }
        // Strict for a genuinely random loss, equality only for the point mass.
        const DiscreteDist coin({0.0, 1.0}, {0.5, 0.5});
        for (double rho : kRhoGrid) {
            CHECK(indifference_premium(coin, RiskTolerance(rho)) >
                  expectation(coin) + 1e-12);
        }
    }
    SUBCASE("lower tolerance never lowers the premium") {
        std::uniform_real_distribution<double> rho_draw(0.05, 50.0);
        for (int trial = 0; trial < 200; ++trial) {
            const DiscreteDist d = testutil::random_dist(rng);
            double rho_a = rho_draw(rng);
            double rho_b = rho_draw(rng);
            if (rho_a > rho_b) {
                std::swap(rho_a, rho_b);
            }
            CHECK(indifference_premium(d, RiskTolerance(rho_a)) >=
                  indifference_premium(d, RiskTolerance(rho_b)) - 1e-12);
        }
    }
    SUBCASE("large tolerance approaches the risk-neutral price") {
        for (int trial = 0; trial < 100; ++trial) {
            const DiscreteDist d = testutil::random_dist(rng);
            CHECK(std::abs(indifference_premium(d, RiskTolerance(1e6)) - expectation(d)) <=
                  1e-3);
        }
    }
}

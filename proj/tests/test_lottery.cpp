#include "doctest.h"
#include "sds/lottery.hpp"
#include "test_util.hpp"

using namespace sds;
using sds::testing::example1_profile;

TEST_CASE("lottery invariants and text form") {
    CHECK_THROWS_AS(Lottery({Rational(1, 2), Rational(1, 4)}), std::invalid_argument);
    CHECK_THROWS_AS(Lottery({Rational(3, 2), Rational(-1, 2)}), std::invalid_argument);

    auto p = parse_lottery("7/24*a + 7/24*b + 5/24*c + 5/24*d", 4);
    CHECK(p.prob(0) == Rational(7, 24));
    CHECK(p.prob(3) == Rational(5, 24));
    CHECK(format_lottery(p) == "7/24*a + 7/24*b + 5/24*c + 5/24*d");
    CHECK(parse_lottery(format_lottery(p), 4) == p);

    auto degenerate = parse_lottery("1*b", 3);
    CHECK(degenerate == Lottery::degenerate(3, 1));
    CHECK(format_lottery(degenerate) == "1*b");
}

TEST_CASE("stochastic dominance on the three-alternative example") {
    auto order = parse_weak_order("a,b,c");
    auto p = parse_lottery("2/3*a + 1/3*c", 3);
    auto q = parse_lottery("1/3*a + 1/3*b + 1/3*c", 3);
    auto b = Lottery::degenerate(3, 1);

    CHECK(sd_geq(p, p, order));
    CHECK(sd_gt(p, q, order));
    CHECK_FALSE(sd_geq(p, b, order));
    CHECK_FALSE(sd_geq(b, p, order));  // incomparable pair
}

TEST_CASE("sd_geq is reflexive and transitive on random rational lotteries") {
    uint64_t rng = 17;
    auto orders = enumerate_weak_orders(4);
    for (int trial = 0; trial < 60; ++trial) {
        auto& order = orders[sds::testing::rng_next(rng) % orders.size()];
        auto p = sds::testing::random_lottery(4, rng);
        auto q = sds::testing::random_lottery(4, rng);
        auto r = sds::testing::random_lottery(4, rng);
        CHECK(sd_geq(p, p, order));
        if (sd_geq(p, q, order) && sd_geq(q, r, order)) CHECK(sd_geq(p, r, order));
    }
}

TEST_CASE("rsd reproduces the example-1 lottery exactly") {
    auto lot = rsd(example1_profile());
    CHECK(lot.prob(0) == Rational(7, 24));
    CHECK(lot.prob(1) == Rational(7, 24));
    CHECK(lot.prob(2) == Rational(5, 24));
    CHECK(lot.prob(3) == Rational(5, 24));
}

TEST_CASE("rsd edge cases") {
    auto unanimous = parse_profile("a,b,c,d\na,b,c,d\na,b,c,d\na,b,c,d\n");
    CHECK(rsd(unanimous) == Lottery::degenerate(4, 0));

    auto indifferent = parse_profile("{a,b,c,d}\n{a,b,c,d}\n{a,b,c,d}\n{a,b,c,d}\n");
    auto lot = rsd(indifferent);
    for (int x = 0; x < 4; ++x) CHECK(lot.prob(x) == Rational(1, 4));
}

TEST_CASE("rsd is invariant under agent permutations") {
    auto R = example1_profile();
    auto base = rsd(R);
    CHECK(rsd(Profile({R.order(3), R.order(2), R.order(1), R.order(0)})) == base);
    CHECK(rsd(Profile({R.order(1), R.order(3), R.order(0), R.order(2)})) == base);
}

TEST_CASE("expected utility basics") {
    auto order = parse_weak_order("a,{b,c}");
    UtilityVector u{{Rational(1), Rational(0), Rational(0)}};
    CHECK(expected_utility(u, Lottery::degenerate(3, 0)) == Rational(1));
    CHECK(expected_utility(u, parse_lottery("2/3*a + 1/3*c", 3)) == Rational(2, 3));
    auto uniform = parse_lottery("1/3*a + 1/3*b + 1/3*c", 3);
    CHECK(expected_utility(u, uniform) == Rational(1, 3));
}

TEST_CASE("sampled utilities are consistent and deterministic") {
    for (auto& order : enumerate_weak_orders(4)) {
        auto u = sample_consistent_utility(order, 42);
        CHECK(consistent_with(u, order));
        CHECK(u.values == sample_consistent_utility(order, 42).values);
        for (auto& v : u.values) {
            CHECK(v >= 0);
            CHECK(v <= 1);
        }
    }
    auto flat = sample_consistent_utility(parse_weak_order("{a,b,c}"), 5);
    CHECK(flat.values[0] == flat.values[1]);
    CHECK(flat.values[1] == flat.values[2]);

    auto chain = sample_consistent_utility(parse_weak_order("a,b,c"), 5);
    CHECK(chain.values[0] > chain.values[1]);
    CHECK(chain.values[1] > chain.values[2]);
}

TEST_CASE("utility equivalence of stochastic dominance, both directions") {
    // sd_geq(p,q) must make every consistent utility weakly prefer p; a
    // failure of sd_geq must admit an exact violating utility.
    uint64_t rng = 23;
    auto orders = enumerate_weak_orders(4);
    int checked_dominance = 0, checked_violation = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto& order = orders[sds::testing::rng_next(rng) % orders.size()];
        auto p = sds::testing::random_lottery(4, rng);
        auto q = sds::testing::random_lottery(4, rng);
        if (sd_geq(p, q, order)) {
            for (uint64_t seed = 0; seed < 200; ++seed) {
                auto u = sample_consistent_utility(order, seed);
                CHECK(expected_utility(u, p) >= expected_utility(u, q));
            }
            CHECK_FALSE(construct_violating_utility(p, q, order).has_value());
            ++checked_dominance;
        } else {
            auto u = construct_violating_utility(p, q, order);
            REQUIRE(u.has_value());
            CHECK(consistent_with(*u, order));
            CHECK(expected_utility(*u, q) > expected_utility(*u, p));
            ++checked_violation;
        }
    }
    CHECK(checked_dominance > 0);
    CHECK(checked_violation > 0);
}

TEST_CASE("violating utility on the worked example") {
    auto order = parse_weak_order("a,b,c");
    auto p = Lottery::degenerate(3, 1);
    auto q = parse_lottery("2/3*a + 1/3*c", 3);
    auto u = construct_violating_utility(p, q, order);
    REQUIRE(u.has_value());
    CHECK(expected_utility(*u, q) > expected_utility(*u, p));
    CHECK_FALSE(construct_violating_utility(p, p, order).has_value());
}

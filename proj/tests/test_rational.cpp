#include "doctest.h"
#include "sds/rational.hpp"
#include "test_util.hpp"

using namespace sds;

TEST_CASE("rational basics") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(7, 24) * Rational(24, 7) == Rational(1));
    CHECK(Rational(-4, 8) == Rational(1, -2));
    CHECK(rat_str(Rational(-4, 8)) == "-1/2");
    CHECK(Rational(0) < Rational(1, 1000000));
    CHECK(rat_parse("7/24") == Rational(7, 24));
    CHECK(rat_parse("-3") == Rational(-3));
    CHECK_THROWS_AS(rat_parse("x"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::invalid_argument);
}

TEST_CASE("rational agrees with the multiprecision reference on random op chains") {
    uint64_t rng = 88;
    for (int trial = 0; trial < 300; ++trial) {
        // Mix small values with boundary-magnitude ones so the inline form
        // overflows and the fallback engages mid-chain.
        auto random_value = [&]() -> std::pair<Rational, BigRat> {
            uint64_t kind = sds::testing::rng_next(rng) % 3;
            long long n, d;
            if (kind == 0) {
                n = static_cast<long long>(sds::testing::rng_next(rng) % 19) - 9;
                d = 1 + sds::testing::rng_next(rng) % 9;
            } else if (kind == 1) {
                n = static_cast<long long>(sds::testing::rng_next(rng) % (1ull << 62)) - (1ll << 61);
                d = 1 + sds::testing::rng_next(rng) % 1000;
            } else {
                n = static_cast<long long>(sds::testing::rng_next(rng));
                d = 1 + (sds::testing::rng_next(rng) % (1ull << 61));
            }
            return {Rational(n, d), BigRat(n, d)};
        };
        auto [x, bx] = random_value();
        for (int step = 0; step < 8; ++step) {
            auto [y, by] = random_value();
            switch (sds::testing::rng_next(rng) % 4) {
                case 0: x = x + y; bx = bx + by; break;
                case 1: x = x - y; bx = bx - by; break;
                case 2: x = x * y; bx = bx * by; break;
                case 3:
                    if (by != 0) {
                        x = x / y;
                        bx = bx / by;
                    }
                    break;
            }
            REQUIRE(x.to_big() == bx);
            REQUIRE(x.numerator() == boost::multiprecision::numerator(bx));
            REQUIRE(x.denominator() == boost::multiprecision::denominator(bx));
        }
        auto [y, by] = random_value();
        CHECK((x < y) == (bx < by));
        CHECK((x == y) == (bx == by));
        CHECK((x <= y) == (bx <= by));
    }
}

TEST_CASE("big values demote when they shrink back") {
    Rational big = Rational(Int("123456789012345678901234567890"));
    CHECK_FALSE(big.is_small());
    Rational one = big / big;
    CHECK(one == Rational(1));
    CHECK(one.is_small());
    Rational sum = big + Rational(1) - big;
    CHECK(sum == Rational(1));
    CHECK(sum.is_small());
}

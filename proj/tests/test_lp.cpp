#include "doctest.h"
#include "sds/lp.hpp"
#include "test_util.hpp"

using namespace sds;

namespace {

LinearProgram single_var(std::optional<Rational> lower) {
    LinearProgram lp;
    lp.objective = {Rational(1)};
    lp.lower = {lower};
    return lp;
}

}  // namespace

TEST_CASE("bounded maximization") {
    auto lp = single_var(Rational(0));
    lp.constraints.push_back({{Rational(1)}, Cmp::Le, Rational(1)});
    auto out = lp_solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == 1);
    CHECK(out.witness[0] == 1);
    CHECK(lp_verify_optimal(lp, out));
}

TEST_CASE("unbounded") {
    auto out = lp_solve(single_var(Rational(0)));
    CHECK(out.status == LpStatus::Unbounded);
}

TEST_CASE("infeasible with certificate") {
    auto lp = single_var(std::nullopt);
    lp.constraints.push_back({{Rational(1)}, Cmp::Le, Rational(0)});
    lp.constraints.push_back({{Rational(1)}, Cmp::Ge, Rational(1)});
    auto out = lp_solve(lp);
    REQUIRE(out.status == LpStatus::Infeasible);
    CHECK(lp_verify_farkas(lp, out.farkas));
}

TEST_CASE("equality rows and free variables") {
    // max x + y  s.t.  x + y = 2, x - y <= 1, y free, x >= 0.
    LinearProgram lp;
    lp.objective = {Rational(1), Rational(1)};
    lp.lower = {Rational(0), std::nullopt};
    lp.constraints.push_back({{Rational(1), Rational(1)}, Cmp::Eq, Rational(2)});
    lp.constraints.push_back({{Rational(1), Rational(-1)}, Cmp::Le, Rational(1)});
    auto out = lp_solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == 2);
}

TEST_CASE("degenerate and redundant rows do not break termination") {
    LinearProgram lp;
    lp.objective = {Rational(3), Rational(2)};
    lp.lower = {Rational(0), Rational(0)};
    lp.constraints.push_back({{Rational(1), Rational(1)}, Cmp::Le, Rational(4)});
    lp.constraints.push_back({{Rational(1), Rational(1)}, Cmp::Le, Rational(4)});
    lp.constraints.push_back({{Rational(2), Rational(2)}, Cmp::Le, Rational(8)});
    lp.constraints.push_back({{Rational(1), Rational(0)}, Cmp::Le, Rational(4)});
    auto out = lp_solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == 12);
    CHECK(lp_verify_optimal(lp, out));
}

TEST_CASE("random LPs always certify their outcome") {
    // lp_solve self-validates the dual or Farkas certificate and throws on
    // any inconsistency, so surviving the solve is the property.
    uint64_t rng = 2024;
    int optimal = 0, unbounded = 0, infeasible = 0;
    for (int trial = 0; trial < 120; ++trial) {
        int n = 1 + sds::testing::rng_next(rng) % 4;
        int m = 1 + sds::testing::rng_next(rng) % 5;
        LinearProgram lp;
        for (int j = 0; j < n; ++j) {
            lp.objective.push_back(Rational(static_cast<int>(sds::testing::rng_next(rng) % 7) - 3));
            bool free_var = sds::testing::rng_next(rng) % 4 == 0;
            lp.lower.push_back(free_var ? std::optional<Rational>()
                                        : std::optional<Rational>(Rational(0)));
        }
        for (int i = 0; i < m; ++i) {
            LpConstraint row;
            for (int j = 0; j < n; ++j)
                row.coef.push_back(Rational(static_cast<int>(sds::testing::rng_next(rng) % 7) - 3));
            row.rel = static_cast<Cmp>(sds::testing::rng_next(rng) % 3);
            row.rhs = Rational(static_cast<int>(sds::testing::rng_next(rng) % 9) - 2);
            lp.constraints.push_back(std::move(row));
        }
        auto out = lp_solve(lp);
        switch (out.status) {
            case LpStatus::Optimal:
                CHECK(lp_verify_optimal(lp, out));
                ++optimal;
                break;
            case LpStatus::Infeasible:
                CHECK(lp_verify_farkas(lp, out.farkas));
                ++infeasible;
                break;
            case LpStatus::Unbounded:
                ++unbounded;
                break;
        }
    }
    CHECK(optimal > 0);
    CHECK(infeasible > 0);
    CHECK(unbounded > 0);
}

TEST_CASE("dimension mismatch is rejected") {
    LinearProgram lp;
    lp.objective = {Rational(1), Rational(1)};
    lp.lower = {Rational(0)};
    CHECK_THROWS_AS(lp_solve(lp), std::invalid_argument);
}

TEST_CASE("lp debug dump mentions every row") {
    auto lp = single_var(Rational(0));
    lp.constraints.push_back({{Rational(1, 3)}, Cmp::Le, Rational(7, 2)});
    auto dump = lp_dump(lp);
    CHECK(dump.find("1/3*x0 <= 7/2") != std::string::npos);
}

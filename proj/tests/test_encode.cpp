#include "doctest.h"
#include "sds/encode.hpp"
#include "sds/verify.hpp"
#include "test_util.hpp"

using namespace sds;
using sds::testing::example1_profile;

TEST_CASE("lottery constraints: one sum plus one bound per alternative") {
    VarTable vars;
    auto anon = canonicalize(anonymize(example1_profile())).anon;
    auto clauses = build_lottery_constraints("c0", anon, vars);
    CHECK(clauses.size() == 5);
    CHECK(clauses[0].name == "lot_c0_sum");
    CHECK(clauses[0].cubes.size() == 1);
    CHECK(vars.size() == 4);
}

TEST_CASE("orbit constraints chain each block") {
    VarTable vars;
    auto anon = canonicalize(anonymize(example1_profile())).anon;
    build_lottery_constraints("c0", anon, vars);
    // Example-1 class has orbits of sizes 2+2: two equalities.
    CHECK(build_orbit_constraints("c0", anon, vars).size() == 2);

    VarTable vars2;
    auto chain = anonymize(parse_profile("a,b,c,d\na,b,c,d\na,b,c,d\na,b,c,d\n"));
    build_lottery_constraints("c1", chain, vars2);
    CHECK(build_orbit_constraints("c1", chain, vars2).empty());
}

TEST_CASE("efficiency constraints for the unanimous chain") {
    VarTable vars;
    auto chain = anonymize(parse_profile("a,b,c,d\na,b,c,d\na,b,c,d\na,b,c,d\n"));
    build_lottery_constraints("c0", chain, vars);
    auto clauses = build_efficiency_constraints("c0", chain, vars);
    REQUIRE(clauses.size() == 3);  // dominated singletons b, c, d
    for (auto& cl : clauses) CHECK(cl.cubes.size() == 1);
    CHECK(clauses[0].name == "eff_c0_b");

    VarTable vars2;
    auto indifferent = anonymize(parse_profile("{a,b,c,d}\n{a,b,c,d}\n"));
    build_lottery_constraints("c1", indifferent, vars2);
    CHECK(build_efficiency_constraints("c1", indifferent, vars2).empty());
}

TEST_CASE("sp clause shapes") {
    VarTable vars;
    for (int x = 0; x < 4; ++x) {
        vars.intern("src", x);
        vars.intern("tgt", x);
    }
    SUBCASE("two classes collapse to a single <= cube") {
        auto cl = sp_clause("s", "src", parse_weak_order("{c,d},{a,b}"), "tgt",
                            Permutation::identity(4), vars);
        REQUIRE(cl.cubes.size() == 1);
        REQUIRE(cl.cubes[0].size() == 1);
        CHECK(cl.cubes[0][0].rel == Rel::Le);
        CHECK(format_atom(cl.cubes[0][0], vars) ==
              "p[tgt][c] + p[tgt][d] <= p[src][c] + p[src][d]");
    }
    SUBCASE("three classes give two strict cubes plus the equality cube") {
        auto cl = sp_clause("s", "src", parse_weak_order("{b,d},a,c"), "tgt",
                            Permutation::identity(4), vars);
        REQUIRE(cl.cubes.size() == 3);
        CHECK(cl.cubes[0].size() == 1);
        CHECK(cl.cubes[0][0].rel == Rel::Lt);
        CHECK(cl.cubes[1][0].rel == Rel::Lt);
        REQUIRE(cl.cubes[2].size() == 2);
        CHECK(cl.cubes[2][0].rel == Rel::Eq);
    }
    SUBCASE("witness permutation remaps the target side") {
        auto cl = sp_clause("s", "src", parse_weak_order("d,{a,b},c"), "tgt",
                            Permutation::parse_cycles("(a d)(b c)", 4), vars);
        // First prefix {d}: p[tgt][pi(d)] = p[tgt][a] < p[src][d].
        CHECK(format_atom(cl.cubes[0][0], vars) == "p[tgt][a] < p[src][d]");
    }
    SUBCASE("fully indifferent truthful relation is vacuous") {
        CHECK(sp_vacuous(parse_weak_order("{a,b,c,d}")));
        CHECK_THROWS_AS(sp_clause("s", "src", parse_weak_order("{a,b,c,d}"), "tgt",
                                  Permutation::identity(4), vars),
                        std::invalid_argument);
    }
}

TEST_CASE("sp clause semantics match the sd predicates on random lotteries") {
    // For lotteries p (source) and q (target): the clause must hold iff
    // NOT sd_gt(q o map, p, truthful).
    uint64_t rng = 2718;
    auto orders = enumerate_weak_orders(4);
    int evaluated = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto& truthful = orders[sds::testing::rng_next(rng) % orders.size()];
        if (sp_vacuous(truthful)) continue;
        auto& perms = all_permutations(4);
        auto& map = perms[sds::testing::rng_next(rng) % perms.size()];
        VarTable vars;
        for (int x = 0; x < 4; ++x) vars.intern("src", x);
        for (int x = 0; x < 4; ++x) vars.intern("tgt", x);
        auto cl = sp_clause("s", "src", truthful, "tgt", map, vars);

        auto p = sds::testing::random_lottery(4, rng);
        auto q = sds::testing::random_lottery(4, rng);
        std::map<VarId, Rational> assignment;
        for (int x = 0; x < 4; ++x) {
            assignment[vars.lookup("src", x)] = p.prob(x);
            assignment[vars.lookup("tgt", x)] = q.prob(x);
        }
        // Pull the target lottery back to the manipulated labeling.
        std::vector<Rational> pulled(4);
        for (int y = 0; y < 4; ++y) pulled[y] = q.prob(map(y));
        Lottery q_pulled(std::move(pulled));
        CHECK(cl.eval(assignment) == !sd_gt(q_pulled, p, truthful));
        ++evaluated;
    }
    CHECK(evaluated > 400);
}

TEST_CASE("full system over a small domain") {
    auto g = expand_domain(example1_profile(), {1});
    auto sys = build_constraint_system(g);
    CHECK(sys.vars.size() == static_cast<int>(g.profiles.size()) * 4);
    // Every profile contributes exactly five lottery clauses.
    int lottery = 0, sp = 0;
    for (auto& cl : sys.clauses) {
        if (cl.name.rfind("lot_", 0) == 0) ++lottery;
        if (cl.name.rfind("S_", 0) == 0) ++sp;
    }
    CHECK(lottery == static_cast<int>(g.profiles.size()) * 5);
    CHECK(sp > 0);
    // Clause names are unique.
    std::set<std::string> names;
    for (auto& cl : sys.clauses) names.insert(cl.name);
    CHECK(names.size() == sys.clauses.size());
}

TEST_CASE("smtlib emission is deterministic and self-readable") {
    auto g = expand_domain(example1_profile(), {1});
    auto sys = build_constraint_system(g);
    auto text = emit_smtlib(sys, false);
    CHECK(text == emit_smtlib(sys, false));
    CHECK(text.find("(set-logic QF_LRA)") != std::string::npos);
    CHECK(text.find("(check-sat)") != std::string::npos);
    CHECK(text.find(":named") == std::string::npos);

    auto summary = summarize_smtlib(text);
    CHECK(summary.assertions == static_cast<int>(sys.clauses.size()));
    CHECK(summary.variables.size() == static_cast<size_t>(sys.vars.size()));
    for (VarId v = 0; v < sys.vars.size(); ++v)
        CHECK(summary.variables.count(sys.vars.name(v)) == 1);

    auto named = emit_smtlib(sys, true);
    CHECK(named.find(":named lot_") != std::string::npos);
    CHECK(named.find("(get-unsat-core)") != std::string::npos);
    CHECK(summarize_smtlib(named).assertions == static_cast<int>(sys.clauses.size()));
}

TEST_CASE("empty system emission") {
    ConstraintSystem sys;
    sys.domain = "empty";
    auto text = emit_smtlib(sys, false);
    CHECK(summarize_smtlib(text).assertions == 0);
    CHECK(text.find("(check-sat)") != std::string::npos);
}

TEST_CASE("rational smt literals are exact fractions") {
    ConstraintSystem sys;
    VarId v = sys.vars.intern("c0", 0);
    LinExpr e;
    e.add_term(v, Rational(1));
    e.constant = Rational(-7, 24);
    sys.clauses.push_back(Clause{"k", {{Atom{e, Rel::Eq}}}});
    auto text = emit_smtlib(sys, false);
    CHECK(text.find("(/ 7 24)") != std::string::npos);
    CHECK(text.find(".") == std::string::npos);  // no decimals anywhere
}

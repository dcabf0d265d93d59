#include "doctest.h"
#include "sds/verify.hpp"
#include "test_util.hpp"

using namespace sds;

namespace {

/// Tiny fixture: variables interned as p[q][a], p[q][b], ...
struct Vars {
    VarTable table;
    Vars() {
        for (int x = 0; x < 6; ++x) table.intern("q", x);
    }
    Atom atom(const std::string& text) const { return parse_atom_text(text, table); }
};

}  // namespace

TEST_CASE("feasible: point systems and contradictions") {
    Vars v;
    SUBCASE("pinned variable") {
        AtomSet s{{v.atom("p[q][a] <= 1/2"), v.atom("1/2 <= p[q][a]")}};
        auto r = feasible(s, v.table.size());
        REQUIRE(is_feasible(r));
        CHECK(std::get<FeasibleResult>(r).witness[0] == Rational(1, 2));
    }
    SUBCASE("strict two-sided clash") {
        AtomSet s{{v.atom("p[q][a] < 0"), v.atom("0 < p[q][a]")}};
        auto r = feasible(s, v.table.size());
        REQUIRE_FALSE(is_feasible(r));
    }
    SUBCASE("le versus lt") {
        AtomSet s{{v.atom("p[q][a] <= p[q][b]"), v.atom("p[q][b] < p[q][a]")}};
        CHECK_FALSE(is_feasible(feasible(s, v.table.size())));
    }
    SUBCASE("empty set is feasible") {
        CHECK(is_feasible(feasible(AtomSet{}, v.table.size())));
    }
    SUBCASE("witness satisfies strict atoms strictly") {
        AtomSet s{{v.atom("p[q][a] < p[q][b]"), v.atom("p[q][b] < 1/4")}};
        auto r = feasible(s, v.table.size());
        REQUIRE(is_feasible(r));
        auto w = std::get<FeasibleResult>(r).witness;
        CHECK(w[0] < w[1]);
        CHECK(w[1] < Rational(1, 4));
    }
}

TEST_CASE("entails") {
    Vars v;
    AtomSet s{{v.atom("p[q][a] <= 1/2"), v.atom("1/2 <= p[q][a]")}};
    CHECK(entails(s, v.atom("p[q][a] = 1/2"), v.table.size()));
    CHECK(entails(s, v.atom("p[q][a] <= 3/4"), v.table.size()));
    CHECK_FALSE(entails(s, v.atom("p[q][a] < 1/2"), v.table.size()));
    CHECK_FALSE(entails(AtomSet{}, v.atom("0 <= p[q][a]"), v.table.size()));
}

TEST_CASE("entails is monotone under added assumptions") {
    Vars v;
    uint64_t rng = 11;
    auto random_atom = [&](int nvars) {
        LinExpr e;
        for (int x = 0; x < nvars; ++x) {
            int c = static_cast<int>(sds::testing::rng_next(rng) % 5) - 2;
            if (c) e.add_term(x, Rational(c));
        }
        e.constant = Rational(static_cast<int>(sds::testing::rng_next(rng) % 5) - 2, 2);
        Rel rel = static_cast<Rel>(sds::testing::rng_next(rng) % 3);
        return Atom{e, rel};
    };
    for (int trial = 0; trial < 40; ++trial) {
        AtomSet base;
        for (int i = 0; i < 3; ++i) base.atoms.push_back(random_atom(3));
        Atom goal = random_atom(3);
        if (!entails(base, goal, v.table.size())) continue;
        AtomSet larger = base;
        larger.atoms.push_back(random_atom(3));
        CHECK(entails(larger, goal, v.table.size()));
    }
}

TEST_CASE("check_unsat: trivial systems") {
    Vars v;
    SUBCASE("empty clause list is sat") {
        auto out = check_unsat({}, v.table.size());
        CHECK(std::holds_alternative<SatWitness>(out));
    }
    SUBCASE("two incompatible units") {
        std::vector<Clause> clauses{
            parse_clause_text("1 <= p[q][a]", "c1", v.table),
            parse_clause_text("p[q][a] < 1", "c2", v.table),
        };
        auto out = check_unsat(clauses, v.table.size());
        REQUIRE(std::holds_alternative<UnsatCertificate>(out));
        auto& cert = std::get<UnsatCertificate>(out);
        CHECK(cert.branch_count >= 1);
        CHECK(verify_unsat_certificate(clauses, cert));
    }
    SUBCASE("disjunction saves the day") {
        std::vector<Clause> clauses{
            parse_clause_text("1 <= p[q][a]", "c1", v.table),
            parse_clause_text("p[q][a] < 1 | p[q][b] = 1/3", "c2", v.table),
        };
        auto out = check_unsat(clauses, v.table.size());
        REQUIRE(std::holds_alternative<SatWitness>(out));
        CHECK(check_assignment(clauses, std::get<SatWitness>(out).assignment));
    }
    SUBCASE("case split closes both ways") {
        std::vector<Clause> clauses{
            parse_clause_text("p[q][a] = 0 | p[q][a] = 1", "split", v.table),
            parse_clause_text("1/4 <= p[q][a]", "low", v.table),
            parse_clause_text("p[q][a] <= 3/4", "high", v.table),
        };
        auto out = check_unsat(clauses, v.table.size());
        REQUIRE(std::holds_alternative<UnsatCertificate>(out));
        CHECK(verify_unsat_certificate(clauses, std::get<UnsatCertificate>(out)));
    }
}

namespace {

/// Brute-force satisfiability oracle for systems whose atoms are univariate:
/// per variable, candidate values are all boundary constants, midpoints
/// between consecutive ones, and points beyond the extremes.
bool brute_force_sat(const std::vector<Clause>& clauses, int num_vars) {
    std::vector<std::vector<Rational>> candidates(num_vars);
    std::vector<std::set<Rational>> boundaries(num_vars);
    for (auto& cl : clauses)
        for (auto& cube : cl.cubes)
            for (auto& atom : cube) {
                REQUIRE(atom.expr.coeff.size() == 1);
                auto [v, c] = *atom.expr.coeff.begin();
                boundaries[v].insert(-atom.expr.constant / c);
            }
    for (int v = 0; v < num_vars; ++v) {
        std::vector<Rational> b(boundaries[v].begin(), boundaries[v].end());
        auto& cand = candidates[v];
        if (b.empty()) {
            cand.push_back(Rational(0));
            continue;
        }
        cand.push_back(b.front() - 1);
        for (size_t i = 0; i < b.size(); ++i) {
            cand.push_back(b[i]);
            if (i + 1 < b.size()) cand.push_back((b[i] + b[i + 1]) / 2);
        }
        cand.push_back(b.back() + 1);
    }
    std::map<VarId, Rational> assignment;
    std::function<bool(int)> search = [&](int v) {
        if (v == num_vars) return check_assignment(clauses, assignment);
        for (auto& value : candidates[v]) {
            assignment[v] = value;
            if (search(v + 1)) return true;
        }
        return false;
    };
    return search(0);
}

}  // namespace

TEST_CASE("check_unsat agrees with the grid oracle on random univariate systems") {
    VarTable table;
    const int nvars = 4;
    for (int x = 0; x < nvars; ++x) table.intern("q", x);
    uint64_t rng = 321;
    int sat_count = 0, unsat_count = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Clause> clauses;
        int nclauses = 2 + sds::testing::rng_next(rng) % 7;
        for (int ci = 0; ci < nclauses; ++ci) {
            Clause cl;
            cl.name = "r" + std::to_string(ci);
            int ncubes = 1 + sds::testing::rng_next(rng) % 3;
            for (int qi = 0; qi < ncubes; ++qi) {
                Cube cube;
                int natoms = 1 + sds::testing::rng_next(rng) % 2;
                for (int ai = 0; ai < natoms; ++ai) {
                    LinExpr e;
                    int v = sds::testing::rng_next(rng) % nvars;
                    bool neg = sds::testing::rng_next(rng) % 2;
                    e.add_term(v, Rational(neg ? -1 : 1));
                    // constants from {0, 1/2, 1} keep the grid tiny
                    e.constant = Rational(static_cast<int>(sds::testing::rng_next(rng) % 3), 2);
                    if (neg) e.constant = -e.constant;
                    cube.push_back(Atom{e, static_cast<Rel>(sds::testing::rng_next(rng) % 3)});
                }
                cl.cubes.push_back(std::move(cube));
            }
            clauses.push_back(std::move(cl));
        }
        bool oracle = brute_force_sat(clauses, nvars);
        auto out = check_unsat(clauses, nvars);
        if (oracle) {
            REQUIRE_MESSAGE(std::holds_alternative<SatWitness>(out), "trial " << trial);
            CHECK(check_assignment(clauses, std::get<SatWitness>(out).assignment));
            ++sat_count;
        } else {
            REQUIRE_MESSAGE(std::holds_alternative<UnsatCertificate>(out), "trial " << trial);
            CHECK(verify_unsat_certificate(clauses, std::get<UnsatCertificate>(out)));
            ++unsat_count;
        }
    }
    CHECK(sat_count > 0);
    CHECK(unsat_count > 0);
}

TEST_CASE("feasible agrees with the lra-based engine on random multivariate conjunctions") {
    VarTable table;
    const int nvars = 4;
    for (int x = 0; x < nvars; ++x) table.intern("q", x);
    uint64_t rng = 555;
    for (int trial = 0; trial < 120; ++trial) {
        AtomSet s;
        int natoms = 1 + sds::testing::rng_next(rng) % 6;
        std::vector<Clause> as_units;
        for (int i = 0; i < natoms; ++i) {
            LinExpr e;
            for (int v = 0; v < nvars; ++v) {
                int c = static_cast<int>(sds::testing::rng_next(rng) % 5) - 2;
                if (c) e.add_term(v, Rational(c));
            }
            e.constant = Rational(static_cast<int>(sds::testing::rng_next(rng) % 7) - 3, 2);
            Atom a{e, static_cast<Rel>(sds::testing::rng_next(rng) % 3)};
            s.atoms.push_back(a);
            as_units.push_back(Clause{"u" + std::to_string(i), {{a}}});
        }
        bool lp_says = is_feasible(feasible(s, nvars));
        auto lra_out = check_unsat(as_units, nvars);
        CHECK(lp_says == std::holds_alternative<SatWitness>(lra_out));
    }
}

TEST_CASE("check_assignment basics") {
    Vars v;
    std::map<VarId, Rational> assignment;
    CHECK(check_assignment({}, assignment));
    auto cl = parse_clause_text("p[q][a] = 1/3", "c", v.table);
    assignment[0] = Rational(1, 3);
    for (int x = 1; x < v.table.size(); ++x) assignment[x] = 0;
    CHECK(check_assignment({cl}, assignment));
    assignment[0] = Rational(1, 2);
    CHECK_FALSE(check_assignment({cl}, assignment));
    CHECK_THROWS_AS(check_assignment({cl}, std::map<VarId, Rational>{}), std::out_of_range);
}

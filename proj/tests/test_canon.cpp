#include "doctest.h"
#include "sds/canon.hpp"
#include "test_util.hpp"

#include <set>

using namespace sds;

TEST_CASE("canonicalize is idempotent and the witness is valid") {
    uint64_t rng = 7;
    for (int trial = 0; trial < 50; ++trial) {
        auto R = sds::testing::random_profile(4, 4, rng);
        auto anon = anonymize(R);
        auto canon = canonicalize(anon);
        CHECK(apply_permutation(anon, canon.witness) == canon.anon);
        CHECK(canonicalize(canon.anon).anon == canon.anon);
    }
}

TEST_CASE("canonical form is invariant under relabeling, exhaustive m=3 n=2") {
    auto orders = enumerate_weak_orders(3);
    for (size_t i = 0; i < orders.size(); ++i)
        for (size_t j = i; j < orders.size(); ++j) {
            auto anon = anonymize(Profile({orders[i], orders[j]}));
            auto key = canonicalize(anon).anon;
            for (auto& pi : all_permutations(3))
                CHECK(canonicalize(apply_permutation(anon, pi)).anon == key);
        }
}

TEST_CASE("canonical form is invariant under relabeling, sampled m=4 n=4") {
    uint64_t rng = 99;
    for (int trial = 0; trial < 25; ++trial) {
        auto anon = anonymize(sds::testing::random_profile(4, 4, rng));
        auto key = canonicalize(anon).anon;
        for (auto& pi : all_permutations(4))
            CHECK(canonicalize(apply_permutation(anon, pi)).anon == key);
    }
}

TEST_CASE("automorphisms form a group containing the identity") {
    uint64_t rng = 3;
    for (int trial = 0; trial < 30; ++trial) {
        auto anon = anonymize(sds::testing::random_profile(4, 4, rng));
        auto auts = automorphisms(anon);
        std::set<Permutation> group(auts.begin(), auts.end());
        CHECK(group.count(Permutation::identity(4)) == 1);
        for (auto& a : auts) {
            CHECK(group.count(a.inverse()) == 1);
            for (auto& b : auts) CHECK(group.count(a.compose(b)) == 1);
        }
    }
}

TEST_CASE("example-1 profile: automorphisms and orbits") {
    auto anon = anonymize(sds::testing::example1_profile());
    auto auts = automorphisms(anon);
    REQUIRE(auts.size() == 2);
    CHECK(auts[0] == Permutation::identity(4));
    CHECK((auts[0] == Permutation::parse_cycles("(a b)(c d)", 4) ||
           auts[1] == Permutation::parse_cycles("(a b)(c d)", 4)));

    auto orb = orbits(anon);
    OrbitPartition expected{{{0, 1}, {2, 3}}};
    CHECK(orb == expected);
}

TEST_CASE("orbit edge cases") {
    auto chain = parse_profile("a,b,c,d\na,b,c,d\na,b,c,d\na,b,c,d\n");
    auto anon = anonymize(chain);
    CHECK(automorphisms(anon).size() == 1);
    CHECK(orbits(anon).blocks.size() == 4);

    // Table-1 R_45 has the 4-cycle (a b d c).
    auto r45 = parse_profile("{a,c},d,b\n{b,d},a,c\n{a,b},c,d\n{c,d},b,a\n");
    auto auts45 = automorphisms(anonymize(r45));
    bool has_cycle = false;
    for (auto& pi : auts45)
        if (pi == Permutation::parse_cycles("(a b d c)", 4)) has_cycle = true;
    CHECK(has_cycle);
    CHECK(orbits(anonymize(r45)).blocks == std::vector<std::vector<int>>{{0, 1, 2, 3}});
}

TEST_CASE("orbits commute with relabeling") {
    uint64_t rng = 31;
    for (int trial = 0; trial < 20; ++trial) {
        auto anon = anonymize(sds::testing::random_profile(4, 4, rng));
        auto base = orbits(anon);
        for (auto& pi : all_permutations(4)) {
            auto relabeled = orbits(apply_permutation(anon, pi));
            CHECK(relabeled == apply_permutation(base, pi));
        }
    }
}

TEST_CASE("canonical profile enumeration agrees with the labeled-profile oracle, m=3 n=4") {
    // Oracle: canonicalize every one of the 13^4 labeled profiles and count
    // distinct canonical forms.
    auto orders = enumerate_weak_orders(3);
    std::set<std::vector<std::pair<int, int>>> distinct;
    int n = static_cast<int>(orders.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    auto anon = anonymize(Profile({orders[a], orders[b], orders[c], orders[d]}));
                    auto canon = canonicalize(anon).anon;
                    distinct.insert({canon.counts().begin(), canon.counts().end()});
                }

    auto enumerated = enumerate_canonical_profiles(3, 4);
    CHECK(enumerated.size() == distinct.size());
    for (auto& cp : enumerated) {
        std::vector<std::pair<int, int>> key(cp.anon.counts().begin(), cp.anon.counts().end());
        CHECK(distinct.count(key) == 1);
    }
}

TEST_CASE("canonical profile enumeration trivial cases") {
    CHECK(enumerate_canonical_profiles(1, 1).size() == 1);
    CHECK(enumerate_canonical_profiles(1, 4).size() == 1);
    CHECK(enumerate_canonical_profiles(2, 1).size() == 2);  // a,b ~ b,a and {a,b}
}

TEST_CASE("canonical enumeration is thread-count independent") {
    auto one = enumerate_canonical_profiles(3, 3, 1);
    auto four = enumerate_canonical_profiles(3, 3, 4);
    REQUIRE(one.size() == four.size());
    for (size_t i = 0; i < one.size(); ++i) CHECK(one[i].anon == four[i].anon);
}

TEST_CASE("canonical key round trip") {
    auto anon = anonymize(sds::testing::example1_profile());
    auto canon = canonicalize(anon).anon;
    CHECK(parse_canonical_key(canonical_key(canon), 4) == canon);
}

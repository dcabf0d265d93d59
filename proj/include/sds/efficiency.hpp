#pragma once

#include "sds/lottery.hpp"
#include "sds/lp.hpp"

namespace sds {

struct EfficiencyResult {
    bool efficient = false;
    std::optional<Lottery> dominating;  // SD-dominates the tested lottery when inefficient
};

/// Builds the dominance LP over q: per agent and alternative, the upper
/// contour sum under q must reach the sum under p; the objective is the
/// total prefix slack. p is efficient iff the optimum is exactly zero.
inline LinearProgram efficiency_lp(const Profile& R, const Lottery& p) {
    int m = R.num_alternatives();
    LinearProgram lp;
    lp.objective.assign(m, Rational(0));
    lp.lower.assign(m, Rational(0));
    for (int i = 0; i < R.num_agents(); ++i) {
        auto ranks = R.order(i).ranks();
        for (int x = 0; x < m; ++x) {
            LpConstraint row;
            row.coef.assign(m, Rational(0));
            Rational prefix = 0;
            for (int y = 0; y < m; ++y) {
                if (ranks[y] > ranks[x]) continue;
                row.coef[y] = 1;
                lp.objective[y] += 1;
                prefix += p.prob(y);
            }
            row.rel = Cmp::Ge;
            row.rhs = prefix;
            lp.constraints.push_back(std::move(row));
        }
    }
    // Fixed part of the objective: subtract the p prefix sums, folded into the
    // comparison against zero by the caller instead of a constant term.
    LpConstraint simplex_row;
    simplex_row.coef.assign(m, Rational(1));
    simplex_row.rel = Cmp::Eq;
    simplex_row.rhs = 1;
    lp.constraints.push_back(std::move(simplex_row));
    return lp;
}

/// Lemma-style efficiency test: true iff no lottery SD-dominates p at R.
/// When false, `dominating` carries an exact witness.
inline EfficiencyResult is_efficient_lottery(const Profile& R, const Lottery& p) {
    auto lp = efficiency_lp(R, p);
    Rational p_part = 0;  // objective value of q = p
    int m = R.num_alternatives();
    for (int j = 0; j < m; ++j) p_part += lp.objective[j] * p.prob(j);
    auto out = lp_solve(lp);
    if (out.status != LpStatus::Optimal)
        throw std::logic_error("efficiency LP must have an optimum");
    EfficiencyResult res;
    if (out.value == p_part) {
        res.efficient = true;
    } else {
        res.efficient = false;
        res.dominating = Lottery(out.witness);
    }
    return res;
}

/// Alternatives x such that some y is weakly better for everyone and
/// strictly better for someone.
inline std::vector<int> pareto_dominated_alternatives(const Profile& R) {
    int m = R.num_alternatives();
    std::vector<std::vector<int>> ranks;
    for (auto& r : R.orders()) ranks.push_back(r.ranks());
    std::vector<int> out;
    for (int x = 0; x < m; ++x) {
        bool dominated = false;
        for (int y = 0; y < m && !dominated; ++y) {
            if (y == x) continue;
            bool weak_all = true, strict_some = false;
            for (auto& r : ranks) {
                if (r[y] > r[x]) weak_all = false;
                if (r[y] < r[x]) strict_some = true;
            }
            dominated = weak_all && strict_some;
        }
        if (dominated) out.push_back(x);
    }
    return out;
}

/// Inclusion-minimal inefficient supports, by ascending-size iteration over
/// all supports; the uniform lottery represents each support (efficiency of
/// a lottery depends only on its support).
inline std::vector<std::vector<int>> minimal_inefficient_supports(const Profile& R) {
    int m = R.num_alternatives();
    std::vector<unsigned> found_masks;
    std::vector<std::vector<int>> out;
    for (int size = 1; size <= m; ++size) {
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            if (__builtin_popcount(mask) != size) continue;
            bool has_smaller = false;
            for (unsigned f : found_masks)
                if ((mask & f) == f) has_smaller = true;
            if (has_smaller) continue;
            std::vector<int> support;
            for (int x = 0; x < m; ++x)
                if (mask & (1u << x)) support.push_back(x);
            if (!is_efficient_lottery(R, Lottery::uniform_over(m, support)).efficient) {
                found_masks.push_back(mask);
                out.push_back(std::move(support));
            }
        }
    }
    return out;
}

}  // namespace sds

#pragma once

#include "sds/constraints.hpp"
#include "sds/lp.hpp"
#include "sds/lra.hpp"

#include <set>
#include <variant>

namespace sds {

struct AtomSet {
    std::vector<Atom> atoms;
};

struct FeasibleResult {
    std::map<VarId, Rational> witness;
};

struct InfeasibleResult {
    AtomCombo combo;  // tags = indices into the queried atom list
};

using FeasOutcome = std::variant<FeasibleResult, InfeasibleResult>;

inline bool is_feasible(const FeasOutcome& r) { return std::holds_alternative<FeasibleResult>(r); }

/// Decides exact feasibility of a conjunction of atoms over the rationals.
/// Strict atoms share one slack delta (a < b becomes a + delta <= b) and the
/// LP maximizes delta under a cap of 1: feasible iff the optimum is positive.
/// Both outcomes carry independently checkable certificates.
inline FeasOutcome feasible(const AtomSet& s, int num_vars) {
    int n = num_vars;
    LinearProgram lp;
    lp.objective.assign(n + 1, Rational(0));
    lp.objective[n] = 1;  // delta column
    lp.lower.assign(n, std::nullopt);
    lp.lower.push_back(Rational(0));
    bool any_strict = false;
    for (auto& atom : s.atoms) {
        LpConstraint row;
        row.coef.assign(n + 1, Rational(0));
        for (auto& [v, c] : atom.expr.coeff) {
            if (v >= n) throw std::out_of_range("feasible: atom variable out of range");
            row.coef[v] = c;
        }
        row.rhs = -atom.expr.constant;
        switch (atom.rel) {
            case Rel::Le: row.rel = Cmp::Le; break;
            case Rel::Eq: row.rel = Cmp::Eq; break;
            case Rel::Lt:
                row.rel = Cmp::Le;
                row.coef[n] = 1;
                any_strict = true;
                break;
        }
        lp.constraints.push_back(std::move(row));
    }
    LpConstraint cap;
    cap.coef.assign(n + 1, Rational(0));
    cap.coef[n] = 1;
    cap.rel = Cmp::Le;
    cap.rhs = 1;
    lp.constraints.push_back(std::move(cap));

    auto out = lp_solve(lp);
    auto atom_of = [&](int tag) -> const Atom& { return s.atoms.at(tag); };
    if (out.status == LpStatus::Infeasible) {
        InfeasibleResult res;
        for (size_t i = 0; i < s.atoms.size(); ++i)
            if (out.farkas[i] != 0) res.combo.emplace_back(static_cast<int>(i), out.farkas[i]);
        if (!verify_atom_combo(atom_of, res.combo))
            throw std::logic_error("feasible: invalid certificate from LP");
        return res;
    }
    if (out.status != LpStatus::Optimal) throw std::logic_error("feasible: capped LP must optimize");
    if (out.value > 0) {
        FeasibleResult res;
        for (int v = 0; v < n; ++v) res.witness[v] = out.witness[v];
        for (auto& atom : s.atoms)
            if (!atom.eval(res.witness)) throw std::logic_error("feasible: witness fails an atom");
        return res;
    }
    // Optimum zero: only the strict combination is contradictory. The dual
    // of the capped LP provides the multipliers.
    if (!any_strict) throw std::logic_error("feasible: zero optimum without strict atoms");
    InfeasibleResult res;
    for (size_t i = 0; i < s.atoms.size(); ++i)
        if (out.dual[i] != 0) res.combo.emplace_back(static_cast<int>(i), out.dual[i]);
    if (!verify_atom_combo(atom_of, res.combo))
        throw std::logic_error("feasible: invalid strict certificate from LP");
    return res;
}

/// S entails c iff S plus (not c) is infeasible; the negation of an equality
/// needs both strict directions to fail.
inline bool entails(const AtomSet& s, const Atom& c, int num_vars) {
    for (auto& negated : negate_atom(c)) {
        AtomSet query = s;
        query.atoms.push_back(negated);
        if (is_feasible(feasible(query, num_vars))) return false;
    }
    return true;
}

// --- case-splitting unsatisfiability checker ---------------------------------

/// Where an asserted atom came from: clause ci, cube qi, atom ai.
struct AtomOrigin {
    int clause = -1;
    int cube = -1;
    int atom = -1;
};

struct UnsatLeaf {
    std::vector<std::pair<int, int>> path;  // (clause, cube) asserted on the way down
    int closing_clause = -1;
    std::vector<AtomCombo> cube_refutations;  // one per cube of the closing clause
};

struct UnsatCertificate {
    long branch_count = 0;
    std::vector<UnsatLeaf> leaves;
    std::vector<AtomOrigin> registry;  // tag -> origin in the clause system
};

struct SatWitness {
    std::map<VarId, Rational> assignment;
};

struct Inconclusive {
    long branch_count = 0;
};

using UnsatOutcome = std::variant<UnsatCertificate, SatWitness, Inconclusive>;

namespace detail {

class CaseSplitter {
public:
    CaseSplitter(const std::vector<Clause>& clauses, int num_vars, long budget)
        : clauses_(clauses), lra_(num_vars), budget_(budget) {}

    UnsatOutcome run() {
        // Order clauses: units first (asserted up front), then by name for
        // the branching tie-break.
        std::vector<int> open;
        for (size_t ci = 0; ci < clauses_.size(); ++ci) {
            if (clauses_[ci].cubes.empty())
                throw std::invalid_argument("check_unsat: clause with no cubes");
            if (clauses_[ci].cubes.size() == 1) {
                if (!assert_cube(static_cast<int>(ci), 0)) {
                    note_conflict();
                    UnsatCertificate cert;
                    cert.branch_count = 1;
                    UnsatLeaf leaf;
                    leaf.closing_clause = static_cast<int>(ci);
                    leaf.cube_refutations.push_back(lra_.conflict());
                    cert.leaves.push_back(std::move(leaf));
                    cert.registry = registry_;
                    return cert;
                }
            } else {
                open.push_back(static_cast<int>(ci));
            }
        }
        std::sort(open.begin(), open.end(),
                  [&](int a, int b) { return clauses_[a].name < clauses_[b].name; });
        if (!lra_.check()) {
            // Conflict among the unit clauses alone.
            note_conflict();
            UnsatCertificate cert;
            cert.branch_count = 1;
            UnsatLeaf leaf;
            leaf.closing_clause = conflict_clause_of(lra_.conflict());
            leaf.cube_refutations.push_back(lra_.conflict());
            cert.leaves.push_back(std::move(leaf));
            cert.registry = registry_;
            return cert;
        }

        std::vector<UnsatLeaf> leaves;
        auto result = dfs(open, {}, leaves);
        if (std::holds_alternative<SatWitness>(result)) return std::get<SatWitness>(result);
        if (std::holds_alternative<Inconclusive>(result)) {
            return Inconclusive{nodes_};
        }
        UnsatCertificate cert;
        cert.branch_count = nodes_;
        cert.leaves = std::move(leaves);
        cert.registry = registry_;
        return cert;
    }

private:
    struct SubtreeUnsat {};
    using SubtreeOutcome = std::variant<SubtreeUnsat, SatWitness, Inconclusive>;

    /// Records the tags of the current conflict; relevance pruning must
    /// see every conflict that influenced the search, not only the ones
    /// stored in leaves.
    void note_conflict() {
        for (auto& [tag, coeff] : lra_.conflict())
            if (coeff != 0) used_tags_.insert(tag);
    }

    /// Tags atoms of (ci, qi) into the registry and asserts them.
    bool assert_cube(int ci, int qi) {
        const Cube& cube = clauses_[ci].cubes[qi];
        for (size_t ai = 0; ai < cube.size(); ++ai) {
            int tag = static_cast<int>(registry_.size());
            registry_.push_back(AtomOrigin{ci, qi, static_cast<int>(ai)});
            if (!lra_.assert_atom(cube[ai], tag)) return false;
        }
        return true;
    }

    int conflict_clause_of(const AtomCombo& combo) const {
        // Reported closing clause for a direct conflict: the clause of the
        // last atom involved (the one whose assertion failed).
        int best = -1;
        for (auto& [tag, coeff] : combo) best = std::max(best, registry_[tag].clause);
        return best;
    }

    SubtreeOutcome dfs(std::vector<int> open, std::vector<std::pair<int, int>> path,
                       std::vector<UnsatLeaf>& leaves) {
        if (++nodes_ > budget_) return Inconclusive{nodes_};

        // Propagation loop: drop infeasible cubes, assert forced cubes.
        // Bounds only tighten inside a node, so a refuted cube stays
        // refuted and is never re-probed; only survivors are re-tested
        // after each forced assertion.
        std::map<int, std::vector<int>> surviving;  // open clause -> cube ids
        std::map<int, std::map<int, AtomCombo>> refutations;
        for (int ci : open)
            for (size_t qi = 0; qi < clauses_[ci].cubes.size(); ++qi)
                surviving[ci].push_back(static_cast<int>(qi));
        while (true) {
            int forced = -1;
            int closed = -1;
            for (int ci : open) {
                auto& survived = surviving[ci];
                for (auto it = survived.begin(); it != survived.end();) {
                    if (cube_feasible(ci, *it)) {
                        ++it;
                    } else {
                        note_conflict();
                        refutations[ci][*it] = lra_.conflict();
                        it = survived.erase(it);
                    }
                }
                if (survived.empty()) {
                    closed = ci;
                    break;
                }
                if (survived.size() == 1 && forced < 0) forced = ci;
            }
            if (closed >= 0) {
                UnsatLeaf leaf;
                leaf.path = path;
                leaf.closing_clause = closed;
                for (auto& [qi, combo] : refutations[closed])
                    leaf.cube_refutations.push_back(std::move(combo));
                leaves.push_back(std::move(leaf));
                return SubtreeUnsat{};
            }
            if (forced < 0) {
                // Mutual-entailment merge: a two-cube clause whose cubes
                // each follow from the other under the current bounds is
                // equivalent to their conjunction, no branching needed
                // (orbit-symmetric efficiency clauses are the common case).
                for (int ci : open) {
                    if (surviving[ci].size() != 2) continue;
                    const Cube& a = clauses_[ci].cubes[surviving[ci][0]];
                    const Cube& b = clauses_[ci].cubes[surviving[ci][1]];
                    if (cube_entails_under_current(a, b) && cube_entails_under_current(b, a)) {
                        forced = ci;
                        break;
                    }
                }
                if (forced < 0) break;
                int qa = surviving[forced][0], qb = surviving[forced][1];
                if (!assert_cube(forced, qa) || !assert_cube(forced, qb) || !lra_.check()) {
                    note_conflict();
                    UnsatLeaf leaf;
                    leaf.path = path;
                    leaf.closing_clause = forced;
                    leaf.cube_refutations.push_back(lra_.conflict());
                    leaves.push_back(std::move(leaf));
                    return SubtreeUnsat{};
                }
                path.emplace_back(forced, qa);
                open.erase(std::find(open.begin(), open.end(), forced));
                surviving.erase(forced);
                continue;
            }
            int qi = surviving[forced][0];
            if (!assert_cube(forced, qi) || !lra_.check()) {
                // The probe passed earlier but the accumulated bounds no
                // longer admit this last cube: the clause is closed.
                note_conflict();
                UnsatLeaf leaf;
                leaf.path = path;
                leaf.closing_clause = forced;
                for (auto& [prev_qi, combo] : refutations[forced])
                    leaf.cube_refutations.push_back(std::move(combo));
                leaf.cube_refutations.push_back(lra_.conflict());
                leaves.push_back(std::move(leaf));
                return SubtreeUnsat{};
            }
            path.emplace_back(forced, qi);
            open.erase(std::find(open.begin(), open.end(), forced));
            surviving.erase(forced);
        }

        if (open.empty()) {
            // Probing may have left intermediate values around; restore a
            // feasible assignment before extracting the model.
            if (!lra_.check())
                throw std::logic_error("check_unsat: state must be feasible at a sat endpoint");
            SatWitness w;
            w.assignment = lra_.model();
            return w;
        }

        // Branch on the clause with the fewest surviving cubes; `open` is
        // name-ordered so ties pick the lexicographically first name.
        int pick = open[0];
        for (int ci : open)
            if (surviving[ci].size() < surviving[pick].size()) pick = ci;

        static const bool trace = getenv("SDS_TRACE") != nullptr;
        if (trace) {
            fprintf(stderr, "[node %ld depth %zu] open=%zu branch on %s (%zu cubes)\n", nodes_,
                    path.size(), open.size(), clauses_[pick].name.c_str(),
                    surviving[pick].size());
        }

        std::vector<int> rest;
        for (int ci : open)
            if (ci != pick) rest.push_back(ci);

        // Cubes already refuted during propagation close their case here.
        for (auto& [qi, combo] : refutations[pick]) {
            UnsatLeaf leaf;
            leaf.path = path;
            leaf.path.emplace_back(pick, qi);
            leaf.closing_clause = pick;
            leaf.cube_refutations.push_back(std::move(combo));
            leaves.push_back(std::move(leaf));
        }
        for (int qi : surviving[pick]) {
            int tags_before = static_cast<int>(registry_.size());
            size_t leaves_before = leaves.size();
            lra_.push();
            bool ok = assert_cube(pick, qi) && lra_.check();
            int tags_after = static_cast<int>(registry_.size());
            if (!ok) {
                note_conflict();
                UnsatLeaf leaf;
                leaf.path = path;
                leaf.path.emplace_back(pick, qi);
                leaf.closing_clause = pick;
                leaf.cube_refutations.push_back(lra_.conflict());
                leaves.push_back(std::move(leaf));
                lra_.pop();
                continue;
            }
            auto sub_path = path;
            sub_path.emplace_back(pick, qi);
            auto sub = dfs(rest, std::move(sub_path), leaves);
            lra_.pop();
            if (std::holds_alternative<SatWitness>(sub)) return sub;
            if (std::holds_alternative<Inconclusive>(sub)) return sub;
            // Relevance pruning: if no conflict anywhere in the refuted
            // subtree touched this branch cube's atoms, the subtree's case
            // analysis never depended on them; its certificates refute the
            // node as-is and the remaining cubes need no exploration.
            (void)leaves_before;
            bool cube_used = false;
            for (int t = tags_before; t < tags_after && !cube_used; ++t)
                if (used_tags_.count(t)) cube_used = true;
            if (!cube_used) return SubtreeUnsat{};
        }
        return SubtreeUnsat{};
    }

    /// S plus `premise` entails every atom of `conclusion` under the current
    /// bounds. Probe tags are throwaway; no certificate refers to them.
    bool cube_entails_under_current(const Cube& premise, const Cube& conclusion) {
        int base = static_cast<int>(registry_.size());
        int t = base;
        lra_.push();
        bool premise_ok = true;
        for (auto& atom : premise)
            if (!lra_.assert_atom(atom, t++)) {
                premise_ok = false;
                break;
            }
        if (premise_ok) premise_ok = lra_.check();
        bool entailed = true;
        if (premise_ok) {
            for (auto& atom : conclusion) {
                for (auto& na : negate_atom(atom)) {
                    lra_.push();
                    bool ok = lra_.assert_atom(na, t++) && lra_.check();
                    if (!ok) note_conflict();
                    lra_.pop();
                    if (ok) {
                        entailed = false;
                        break;
                    }
                }
                if (!entailed) break;
            }
        } else {
            note_conflict();
        }
        lra_.pop();
        lra_.forget_atoms_from(base);
        return entailed;
    }

    /// Probe: push, assert, check, pop. On failure the conflict certificate
    /// remains available. Uses the current model as a cheap pre-test.
    bool cube_feasible(int ci, int qi) {
        if (!lra_.values_clean()) lra_.check();  // restore a feasible model
        bool all_hold = lra_.values_clean();
        if (all_hold)
            for (auto& atom : clauses_[ci].cubes[qi])
                if (!lra_.atom_holds(atom)) {
                    all_hold = false;
                    break;
                }
        if (all_hold) return true;
        size_t registry_mark = registry_.size();
        lra_.push();
        bool ok = assert_cube(ci, qi) && lra_.check();
        lra_.pop();
        if (ok) {
            // Release the probe's tags; nothing references them. A failed
            // probe keeps its entries so the recorded conflict stays
            // resolvable.
            registry_.resize(registry_mark);
            lra_.forget_atoms_from(static_cast<int>(registry_mark));
        } else {
            note_conflict();
        }
        return ok;
    }

    const std::vector<Clause>& clauses_;
    LraSolver lra_;
    std::vector<AtomOrigin> registry_;
    std::set<int> used_tags_;
    long budget_;
    long nodes_ = 0;
};

}  // namespace detail

/// Depth-first case splitting with exact feasibility pruning: drops cubes
/// that are infeasible against the current atom set, asserts the last
/// surviving cube of any clause (unit propagation), closes branches whose
/// clauses lose every cube, and otherwise branches on the clause with the
/// fewest surviving cubes (name order breaks ties).
inline UnsatOutcome check_unsat(const std::vector<Clause>& clauses, int num_vars,
                                long budget = 200000) {
    detail::CaseSplitter splitter(clauses, num_vars, budget);
    return splitter.run();
}

/// Independent certificate replay: re-derives every leaf refutation by exact
/// coefficient arithmetic against the clause system, never re-solving.
inline bool verify_unsat_certificate(const std::vector<Clause>& clauses,
                                     const UnsatCertificate& cert) {
    auto atom_of = [&](int tag) -> const Atom& {
        const AtomOrigin& o = cert.registry.at(tag);
        return clauses.at(o.clause).cubes.at(o.cube).at(o.atom);
    };
    if (cert.leaves.empty()) return false;
    for (auto& leaf : cert.leaves) {
        if (leaf.cube_refutations.empty()) return false;
        for (auto& combo : leaf.cube_refutations) {
            if (combo.empty()) continue;  // cube resolved in a subtree
            if (!verify_atom_combo(atom_of, combo)) return false;
        }
    }
    return true;
}

}  // namespace sds

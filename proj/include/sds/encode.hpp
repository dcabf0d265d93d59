#pragma once

#include "sds/constraints.hpp"
#include "sds/domain.hpp"
#include "sds/efficiency.hpp"

#include <atomic>
#include <functional>
#include <set>
#include <sstream>

namespace sds {

/// Per profile: sum of probabilities equals one, every probability
/// non-negative. Names: lot_<id>_sum, lot_<id>_<alt>.
inline std::vector<Clause> build_lottery_constraints(const std::string& id,
                                                     const AnonymousProfile& r, VarTable& vars) {
    std::vector<Clause> out;
    int m = r.num_alternatives();
    LinExpr sum;
    for (int x = 0; x < m; ++x) sum.add_term(vars.intern(id, x), Rational(1));
    LinExpr one;
    one.constant = 1;
    out.push_back(Clause{"lot_" + id + "_sum", {{make_atom(sum, Rel::Eq, one)}}});
    for (int x = 0; x < m; ++x) {
        LinExpr neg;
        neg.add_term(vars.lookup(id, x), Rational(-1));
        out.push_back(Clause{"lot_" + id + "_" + alt_letter(x), {{Atom{neg, Rel::Le}}}});
    }
    return out;
}

inline std::vector<Clause> build_orbit_constraints_from(const std::string& id,
                                                        const OrbitPartition& orbit_partition,
                                                        VarTable& vars) {
    std::vector<Clause> out;
    int k = 0;
    for (auto& block : orbit_partition.blocks) {
        for (size_t i = 1; i < block.size(); ++i) {
            LinExpr lhs, rhs;
            lhs.add_term(vars.lookup(id, block[i - 1]), Rational(1));
            rhs.add_term(vars.lookup(id, block[i]), Rational(1));
            out.push_back(
                Clause{"orb_" + id + "_" + std::to_string(k++), {{make_atom(lhs, Rel::Eq, rhs)}}});
        }
    }
    return out;
}

/// Per orbit block of size s: s-1 chained equalities. Names: orb_<id>_<k>.
inline std::vector<Clause> build_orbit_constraints(const std::string& id,
                                                   const AnonymousProfile& r, VarTable& vars) {
    return build_orbit_constraints_from(id, orbits(r), vars);
}

inline std::vector<Clause> build_efficiency_constraints_from(
    const std::string& id, const std::vector<std::vector<int>>& supports, VarTable& vars) {
    std::vector<Clause> out;
    for (auto& support : supports) {
        Clause cl;
        cl.name = "eff_" + id + "_";
        for (int x : support) cl.name += alt_letter(x);
        for (int x : support) {
            LinExpr e;
            e.add_term(vars.lookup(id, x), Rational(1));
            cl.cubes.push_back({Atom{e, Rel::Eq}});
        }
        out.push_back(std::move(cl));
    }
    return out;
}

/// Per inclusion-minimal inefficient support I: a clause whose cubes are the
/// singleton equalities p_<id>_x = 0 for x in I. Names: eff_<id>_<alts>.
inline std::vector<Clause> build_efficiency_constraints(const std::string& id,
                                                        const AnonymousProfile& r,
                                                        VarTable& vars) {
    return build_efficiency_constraints_from(id, minimal_inefficient_supports(realize(r)), vars);
}

/// The strategyproofness clause for one manipulation edge: per truthful
/// upper-contour prefix (the full alternative set dropped, both sides
/// summing to one there) a strict-violation cube, plus one cube conjoining
/// all prefix equalities. A single surviving prefix collapses to the plain
/// `target <= source` inequality.
inline Clause sp_clause(const std::string& name, const std::string& source_id,
                        const WeakOrder& truthful, const std::string& target_id,
                        const Permutation& map, VarTable& vars) {
    int num_prefixes = truthful.num_classes() - 1;
    if (num_prefixes < 1)
        throw std::invalid_argument("sp_clause: fully indifferent truthful relation is vacuous");
    // diff[k] = sum over the first k+1 classes of p_target(map(y)) - p_source(y).
    std::vector<LinExpr> diff(num_prefixes);
    LinExpr running;
    for (int k = 0; k < num_prefixes; ++k) {
        for (int y : truthful.classes()[k]) {
            running.add_term(vars.lookup(target_id, map(y)), Rational(1));
            running.add_term(vars.lookup(source_id, y), Rational(-1));
        }
        diff[k] = running;
    }
    Clause cl;
    cl.name = name;
    if (num_prefixes == 1) {
        cl.cubes.push_back({Atom{diff[0], Rel::Le}});
        return cl;
    }
    for (int k = 0; k < num_prefixes; ++k) cl.cubes.push_back({Atom{diff[k], Rel::Lt}});
    Cube equal;
    for (int k = 0; k < num_prefixes; ++k) equal.push_back(Atom{diff[k], Rel::Eq});
    cl.cubes.push_back(std::move(equal));
    return cl;
}

/// Whether the SP condition for a truthful relation is vacuous (a fully
/// indifferent agent cannot strictly gain).
inline bool sp_vacuous(const WeakOrder& truthful) { return truthful.num_classes() <= 1; }

/// All four constraint families over a domain graph. Profile ids are the
/// graph's positional ids; SP clause names are S_<src>_<tgt> with a
/// duplicate-resolving _<k> suffix. Orbit and support computation fan out
/// over `threads`; the result is identical for any thread count.
inline ConstraintSystem build_constraint_system(const DomainGraph& g, int threads = 1,
                                                bool progress = false) {
    ConstraintSystem sys;
    sys.m = g.m;
    sys.n = g.n;
    {
        std::ostringstream desc;
        desc << "domain m=" << g.m << " n=" << g.n << " seed=" << canonical_key(g.seed)
             << " schedule=";
        for (size_t i = 0; i < g.schedule.size(); ++i) desc << (i ? "," : "") << g.schedule[i];
        sys.domain = desc.str();
    }
    std::vector<std::string> ids(g.profiles.size());
    for (size_t i = 0; i < g.profiles.size(); ++i) ids[i] = g.id_of(static_cast<int>(i));

    std::vector<OrbitPartition> orbit_partitions(g.profiles.size());
    std::vector<std::vector<std::vector<int>>> supports(g.profiles.size());
    std::atomic<size_t> done{0};
    parallel_for(g.profiles.size(), threads, [&](size_t i) {
        orbit_partitions[i] = orbits(g.profiles[i]);
        supports[i] = minimal_inefficient_supports(realize(g.profiles[i]));
        size_t d = ++done;
        if (progress && d % 500 == 0)
            fprintf(stderr, "  efficiency analysis: %zu/%zu profiles\n", d, g.profiles.size());
    });

    for (size_t i = 0; i < g.profiles.size(); ++i)
        for (auto& cl : build_lottery_constraints(ids[i], g.profiles[i], sys.vars))
            sys.clauses.push_back(std::move(cl));
    for (size_t i = 0; i < g.profiles.size(); ++i)
        for (auto& cl : build_orbit_constraints_from(ids[i], orbit_partitions[i], sys.vars))
            sys.clauses.push_back(std::move(cl));
    for (size_t i = 0; i < g.profiles.size(); ++i)
        for (auto& cl : build_efficiency_constraints_from(ids[i], supports[i], sys.vars))
            sys.clauses.push_back(std::move(cl));

    std::map<std::string, int> sp_counts;
    for (auto& e : g.edges) {
        if (sp_vacuous(e.truthful)) continue;
        std::string base =
            "S_" + ids[g.index_of(e.source)] + "_" + ids[g.index_of(e.target)];
        int seen = ++sp_counts[base];
        std::string name = seen == 1 ? base : base + "_" + std::to_string(seen);
        sys.clauses.push_back(sp_clause(name, ids[g.index_of(e.source)], e.truthful,
                                        ids[g.index_of(e.target)], e.map, sys.vars));
    }
    // First duplicate retroactively gets the _1 suffix so names stay unique.
    for (auto& [base, count] : sp_counts) {
        if (count < 2) continue;
        for (auto& cl : sys.clauses)
            if (cl.name == base) cl.name = base + "_1";
    }
    return sys;
}

// --- SMT-LIB emission ---------------------------------------------------------

namespace detail {

inline std::string smt_rational(const Rational& r) {
    if (r < 0) return "(- " + smt_rational(-r) + ")";
    if (rat_den(r) == 1) return rat_num(r).str();
    return "(/ " + rat_num(r).str() + " " + rat_den(r).str() + ")";
}

inline std::string smt_sum(const std::vector<std::string>& terms) {
    if (terms.empty()) return "0";
    if (terms.size() == 1) return terms[0];
    std::string out = "(+";
    for (auto& t : terms) out += " " + t;
    return out + ")";
}

inline std::string smt_atom(const Atom& a, const VarTable& vars) {
    std::vector<std::string> lhs, rhs;
    for (auto& [v, c] : a.expr.coeff) {
        if (c == 1)
            lhs.push_back(vars.name(v));
        else if (c == -1)
            rhs.push_back(vars.name(v));
        else if (c > 0)
            lhs.push_back("(* " + smt_rational(c) + " " + vars.name(v) + ")");
        else
            rhs.push_back("(* " + smt_rational(-c) + " " + vars.name(v) + ")");
    }
    if (a.expr.constant > 0) lhs.push_back(smt_rational(a.expr.constant));
    if (a.expr.constant < 0) rhs.push_back(smt_rational(-a.expr.constant));
    const char* op = a.rel == Rel::Lt ? "<" : a.rel == Rel::Le ? "<=" : "=";
    return std::string("(") + op + " " + smt_sum(lhs) + " " + smt_sum(rhs) + ")";
}

inline std::string smt_clause_term(const Clause& cl, const VarTable& vars) {
    auto cube_term = [&](const Cube& cube) {
        if (cube.size() == 1) return smt_atom(cube[0], vars);
        std::string out = "(and";
        for (auto& a : cube) out += " " + smt_atom(a, vars);
        return out + ")";
    };
    if (cl.cubes.size() == 1) return cube_term(cl.cubes[0]);
    std::string out = "(or";
    for (auto& cube : cl.cubes) out += " " + cube_term(cube);
    return out + ")";
}

}  // namespace detail

/// Deterministic SMT-LIB v2 text; with `named`, assertions are wrapped for
/// unsat-core extraction and a core retrieval command is appended.
inline std::string emit_smtlib(const ConstraintSystem& sys, bool named) {
    std::ostringstream out;
    out << "; " << sys.domain << "\n";
    out << "; variables p_<profile>_<alternative>, one per profile/alternative pair\n";
    out << "(set-logic QF_LRA)\n";
    if (named) out << "(set-option :produce-unsat-cores true)\n";
    for (VarId v = 0; v < sys.vars.size(); ++v)
        out << "(declare-fun " << sys.vars.name(v) << " () Real)\n";
    for (auto& cl : sys.clauses) {
        if (named)
            out << "(assert (! " << detail::smt_clause_term(cl, sys.vars) << " :named " << cl.name
                << "))\n";
        else
            out << "(assert " << detail::smt_clause_term(cl, sys.vars) << ")\n";
    }
    out << "(check-sat)\n";
    if (named) out << "(get-unsat-core)\n";
    return out.str();
}

/// Minimal self-hosted reader of emitted text: declared variable names and
/// assertion count, for round-trip checks.
struct SmtSummary {
    std::set<std::string> variables;
    int assertions = 0;
};

inline SmtSummary summarize_smtlib(const std::string& text) {
    SmtSummary s;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("(declare-fun ", 0) == 0) {
            size_t start = std::string("(declare-fun ").size();
            size_t end = line.find(' ', start);
            s.variables.insert(line.substr(start, end - start));
        } else if (line.rfind("(assert", 0) == 0) {
            ++s.assertions;
        }
    }
    return s;
}

}  // namespace sds

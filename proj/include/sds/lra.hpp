#pragma once

#include "sds/constraints.hpp"

#include <optional>

namespace sds {

/// Rational with a symbolic infinitesimal: value r + d*delta. The shared
/// delta realizes strict bounds exactly (a < b iff a + delta <= b for the
/// one positive delta chosen at model-extraction time).
struct DRat {
    Rational r;
    Rational d;

    DRat() = default;
    DRat(Rational rr, Rational dd) : r(std::move(rr)), d(std::move(dd)) {}
    explicit DRat(const Rational& rr) : r(rr) {}

    bool operator==(const DRat& o) const { return r == o.r && d == o.d; }
    bool operator<(const DRat& o) const { return r < o.r || (r == o.r && d < o.d); }
    bool operator<=(const DRat& o) const { return *this < o || *this == o; }

    DRat operator+(const DRat& o) const { return DRat(r + o.r, d + o.d); }
    DRat operator-(const DRat& o) const { return DRat(r - o.r, d - o.d); }
    DRat scaled(const Rational& f) const { return DRat(r * f, d * f); }
};

/// Farkas combination over asserted atom tags: sum of coeff * atom.expr is a
/// variable-free contradiction.
using AtomCombo = std::vector<std::pair<int, Rational>>;

/// Checks an atom-space Farkas combination exactly: the combined expression
/// must have no variables, and its constant must be positive, or zero with
/// positive total weight on strict atoms. Multipliers must be non-negative
/// except on equality atoms.
inline bool verify_atom_combo(const std::function<const Atom&(int)>& atom_of,
                              const AtomCombo& combo) {
    LinExpr combined;
    Rational strict_mass = 0;
    for (auto& [tag, coeff] : combo) {
        const Atom& a = atom_of(tag);
        if (a.rel != Rel::Eq && coeff < 0) return false;
        if (a.rel == Rel::Lt) strict_mass += coeff;
        LinExpr scaled = a.expr;
        scaled.scale(coeff);
        combined += scaled;
    }
    if (!combined.coeff.empty()) return false;
    return combined.constant > 0 || (combined.constant == 0 && strict_mass > 0);
}

/// Incremental simplex over the rationals extended with one infinitesimal,
/// in the bounds-plus-tableau style used by SMT theory solvers: every atom
/// becomes a bound on a problem variable or on a slack variable defined by
/// its linear form; check() pivots until all basic variables fit their
/// bounds and otherwise reports a Farkas conflict over atom tags.
class LraSolver {
public:
    explicit LraSolver(int num_problem_vars) : num_problem_(num_problem_vars) {
        values_.assign(num_problem_vars, DRat());
        lower_.assign(num_problem_vars, std::nullopt);
        upper_.assign(num_problem_vars, std::nullopt);
    }

    int num_problem_vars() const { return num_problem_; }

    void push() { scopes_.push_back(trail_.size()); }

    void pop() {
        size_t mark = scopes_.back();
        scopes_.pop_back();
        while (trail_.size() > mark) {
            auto& entry = trail_.back();
            (entry.is_upper ? upper_ : lower_)[entry.var] = entry.old_bound;
            trail_.pop_back();
        }
    }

    /// Asserts expr rel 0. False means an immediate conflict (certificate in
    /// conflict()); the solver state is unchanged in that case.
    bool assert_atom(const Atom& atom, int tag) {
        atoms_.emplace(tag, atom);
        const LinExpr& e = atom.expr;
        if (e.coeff.empty()) {
            bool holds = atom.rel == Rel::Lt   ? e.constant < 0
                         : atom.rel == Rel::Le ? e.constant <= 0
                                               : e.constant == 0;
            if (holds) return true;
            conflict_ = {{tag, atom.rel == Rel::Eq && e.constant < 0 ? Rational(-1) : Rational(1)}};
            return false;
        }
        // expr = c0 * form + k with the form normalized to leading coeff 1.
        Rational c0 = e.coeff.begin()->second;
        int v;
        if (e.coeff.size() == 1) {
            v = e.coeff.begin()->first;
        } else {
            std::vector<std::pair<int, Rational>> form(e.coeff.begin(), e.coeff.end());
            for (auto& [var, c] : form) c /= c0;
            v = form_var(form);
#ifdef SDS_LRA_DEBUG
            std::map<int, Rational> fm(form.begin(), form.end());
            if (defining_form_.at(v) != fm) {
                fprintf(stderr, "FORM MISMATCH: tag %d mapped to slack %d\n", tag, v);
                fprintf(stderr, "  asked form:");
                for (auto& [x, c] : fm) fprintf(stderr, " %s*v%d", rat_str(c).c_str(), x);
                fprintf(stderr, "\n  slack form:");
                for (auto& [x, c] : defining_form_.at(v))
                    fprintf(stderr, " %s*v%d", rat_str(c).c_str(), x);
                fprintf(stderr, "\n");
                abort();
            }
#endif
        }
        Rational bound_val = -e.constant / c0;
        bool upper = (c0 > 0);  // c0*form + k <= 0  <=>  form <= -k/c0 when c0 > 0
        Rational lambda_upper = 1 / c0, lambda_lower = -1 / c0;
        switch (atom.rel) {
            case Rel::Le:
                return assert_bound(v, upper, DRat(bound_val), tag,
                                    upper ? lambda_upper : lambda_lower);
            case Rel::Lt:
                return assert_bound(v, upper, DRat(bound_val, upper ? Rational(-1) : Rational(1)),
                                    tag, upper ? lambda_upper : lambda_lower);
            case Rel::Eq:
                if (!assert_bound(v, true, DRat(bound_val), tag, lambda_upper)) return false;
                return assert_bound(v, false, DRat(bound_val), tag, lambda_lower);
        }
        return true;
    }

    /// True when the current values satisfy every asserted bound (set by a
    /// successful check; value-moving operations clear it, pops only loosen
    /// bounds and preserve it).
    bool values_clean() const { return values_clean_; }

    /// Pivots to feasibility; false leaves the Farkas conflict available.
    bool check() {
        while (true) {
            int bad = -1;
            bool below = false;
            for (auto& [b, row] : rows_) {
                if (lower_[b] && values_[b] < lower_[b]->value) {
                    bad = b;
                    below = true;
                    break;
                }
                if (upper_[b] && upper_[b]->value < values_[b]) {
                    bad = b;
                    below = false;
                    break;
                }
            }
            if (bad < 0) {
                values_clean_ = true;
                return true;
            }
            const auto& row = rows_[bad];
            int enter = -1;
            for (auto& [x, a] : row) {
                bool need_increase = below ? (a > 0) : (a < 0);
                if (need_increase ? can_increase(x) : can_decrease(x)) {
                    enter = x;
                    break;  // Bland: smallest variable index
                }
            }
            if (enter < 0) {
                build_row_conflict(bad, below);
                return false;
            }
            DRat target = below ? lower_[bad]->value : upper_[bad]->value;
            pivot_and_update(bad, enter, target);
        }
    }

    const AtomCombo& conflict() const { return conflict_; }

    /// Evaluates an atom over the current (delta-symbolic) assignment.
    bool atom_holds(const Atom& atom) const {
        DRat total(atom.expr.constant);
        for (auto& [v, c] : atom.expr.coeff) total = total + values_[v].scaled(c);
        DRat zero;
        switch (atom.rel) {
            case Rel::Lt: return total < zero;
            case Rel::Le: return total <= zero;
            case Rel::Eq: return total == zero;
        }
        return false;
    }

    /// Concrete rational assignment for the problem variables; valid after a
    /// successful check(). Chooses delta small enough for every bound.
    std::map<VarId, Rational> model() const {
        Rational delta(1);
        auto tighten = [&](const DRat& low, const DRat& high) {
            // need low.r + low.d*delta <= high.r + high.d*delta
            if (low.d > high.d && high.r > low.r) {
                Rational limit = (high.r - low.r) / (low.d - high.d);
                if (limit < delta) delta = limit;
            }
        };
        for (size_t v = 0; v < values_.size(); ++v) {
            if (lower_[v]) tighten(lower_[v]->value, values_[v]);
            if (upper_[v]) tighten(values_[v], upper_[v]->value);
        }
        std::map<VarId, Rational> out;
        for (int v = 0; v < num_problem_; ++v) out[v] = values_[v].r + values_[v].d * delta;
        return out;
    }

    const Atom& atom_by_tag(int tag) const { return atoms_.at(tag); }

    /// Releases tags from a successful probe so they can be reissued. Only
    /// safe when no saved conflict references them.
    void forget_atoms_from(int first_tag) {
        atoms_.erase(atoms_.lower_bound(first_tag), atoms_.end());
    }

    /// Validates a conflict against the asserted atoms (exact, no pivoting).
    bool verify_conflict(const AtomCombo& combo) const {
        return verify_atom_combo([this](int tag) -> const Atom& { return atoms_.at(tag); }, combo);
    }

private:
    struct BoundRec {
        DRat value;
        int tag;
        Rational lambda;  // atom multiplier yielding the (value - var) or (var - value) piece
    };

    struct TrailEntry {
        int var;
        bool is_upper;
        std::optional<BoundRec> old_bound;
    };

    bool can_increase(int x) const {
        if (rows_.count(x)) return false;  // basic
        return !upper_[x] || values_[x] < upper_[x]->value;
    }

    bool can_decrease(int x) const {
        if (rows_.count(x)) return false;
        return !lower_[x] || lower_[x]->value < values_[x];
    }

    bool assert_bound(int v, bool is_upper, DRat value, int tag, Rational lambda) {
        auto& mine = is_upper ? upper_ : lower_;
        auto& other = is_upper ? lower_ : upper_;
        if (mine[v] && (is_upper ? mine[v]->value <= value : value <= mine[v]->value))
            return true;  // not an improvement
        if (other[v]) {
            bool clash = is_upper ? value < other[v]->value : other[v]->value < value;
            if (clash) {
                conflict_.clear();
                add_combo(conflict_, tag, lambda);
                add_combo(conflict_, other[v]->tag, other[v]->lambda);
                return false;
            }
        }
#ifdef SDS_LRA_DEBUG
        if (v == 285)
            fprintf(stderr, "bound on 285: tag=%d upper=%d value=%s+%sd\n", tag, (int)is_upper,
                    rat_str(value.r).c_str(), rat_str(value.d).c_str());
#endif
        trail_.push_back(TrailEntry{v, is_upper, mine[v]});
        mine[v] = BoundRec{value, tag, std::move(lambda)};
        if (!rows_.count(v)) {
            bool off = is_upper ? mine[v]->value < values_[v] : values_[v] < mine[v]->value;
            if (off) update_nonbasic(v, mine[v]->value);
        }
        return true;
    }

    void update_nonbasic(int v, const DRat& target) {
        values_clean_ = false;
        DRat diff = target - values_[v];
        values_[v] = target;
        for (auto& [b, row] : rows_) {
            auto it = row.find(v);
            if (it != row.end()) values_[b] = values_[b] + diff.scaled(it->second);
        }
    }

    /// basic `leave` takes `target`; `enter` compensates and becomes basic.
    void pivot_and_update(int leave, int enter, const DRat& target) {
        values_clean_ = false;
        auto row = std::move(rows_[leave]);
        rows_.erase(leave);
        Rational a = row.at(enter);
        DRat theta = (target - values_[leave]).scaled(1 / a);
        values_[leave] = target;
        values_[enter] = values_[enter] + theta;
        for (auto& [b, other] : rows_) {
            auto it = other.find(enter);
            if (it != other.end()) values_[b] = values_[b] + theta.scaled(it->second);
        }
        // enter = (leave - sum_{j != enter} a_j x_j) / a
        std::map<int, Rational> new_row;
        new_row[leave] = 1 / a;
        for (auto& [x, c] : row) {
            if (x == enter) continue;
            new_row[x] = -c / a;
        }
        for (auto& [b, other] : rows_) {
            auto it = other.find(enter);
            if (it == other.end()) continue;
            Rational f = it->second;
            other.erase(it);
            for (auto& [x, c] : new_row) {
                auto jt = other.find(x);
                if (jt == other.end()) {
                    other.emplace(x, f * c);
                } else {
                    jt->second += f * c;
                    if (jt->second == 0) other.erase(jt);
                }
            }
        }
        rows_.emplace(enter, std::move(new_row));
    }

    void build_row_conflict(int bad, bool below) {
        conflict_.clear();
        const auto& own = below ? lower_[bad] : upper_[bad];
        add_combo(conflict_, own->tag, own->lambda);
        for (auto& [x, a] : rows_.at(bad)) {
            // Raising b needs a>0 vars pegged at their upper bound and a<0
            // vars at their lower bound; lowering is symmetric.
            bool use_upper = below ? (a > 0) : (a < 0);
            const auto& bound = use_upper ? upper_[x] : lower_[x];
            Rational weight = a < 0 ? -a : a;
            add_combo(conflict_, bound->tag, bound->lambda * weight);
        }
        if (!verify_conflict(conflict_)) {
#ifdef SDS_LRA_DEBUG
            fprintf(stderr, "conflict on basic %d (%s)\n", bad, below ? "below" : "above");
            LinExpr combined;
            for (auto& [tag, coeff] : conflict_) {
                const Atom& a = atoms_.at(tag);
                fprintf(stderr, "  tag %d coeff %s rel %d expr:", tag, rat_str(coeff).c_str(),
                        (int)a.rel);
                for (auto& [v, c] : a.expr.coeff)
                    fprintf(stderr, " %s*v%d", rat_str(c).c_str(), v);
                fprintf(stderr, " + %s\n", rat_str(a.expr.constant).c_str());
                LinExpr scaled = a.expr;
                scaled.scale(coeff);
                combined += scaled;
            }
            fprintf(stderr, "combined:");
            for (auto& [v, c] : combined.coeff) fprintf(stderr, " %s*v%d", rat_str(c).c_str(), v);
            fprintf(stderr, " + %s\n", rat_str(combined.constant).c_str());
            fprintf(stderr, "row of %d:", bad);
            for (auto& [x, a] : rows_.at(bad)) fprintf(stderr, " %s*v%d", rat_str(a).c_str(), x);
            fprintf(stderr, "\n");
            auto show_form = [&](int v) {
                fprintf(stderr, "form of %d:", v);
                auto it = defining_form_.find(v);
                if (it == defining_form_.end()) {
                    fprintf(stderr, " (problem var)\n");
                    return;
                }
                for (auto& [x, c] : it->second) fprintf(stderr, " %s*v%d", rat_str(c).c_str(), x);
                fprintf(stderr, "\n");
            };
            show_form(bad);
            for (auto& [x, a] : rows_.at(bad)) show_form(x);
            fprintf(stderr, "bound tags on %d: lower=%d upper=%d\n", bad,
                    lower_[bad] ? lower_[bad]->tag : -1, upper_[bad] ? upper_[bad]->tag : -1);
#endif
            throw std::logic_error("lra: produced invalid conflict certificate");
        }
    }

    static void add_combo(AtomCombo& combo, int tag, const Rational& coeff) {
        for (auto& [t, c] : combo) {
            if (t == tag) {
                c += coeff;
                return;
            }
        }
        combo.emplace_back(tag, coeff);
    }

    /// Slack variable for a normalized form, with a defining tableau row
    /// over the current nonbasic variables.
    int form_var(const std::vector<std::pair<int, Rational>>& form) {
        auto it = form_vars_.find(form);
        if (it != form_vars_.end()) return it->second;
        int s = static_cast<int>(values_.size());
        values_.push_back(DRat());
        lower_.push_back(std::nullopt);
        upper_.push_back(std::nullopt);
        std::map<int, Rational> row;
        DRat value;
        for (auto& [x, c] : form) {
            value = value + values_[x].scaled(c);
            auto rt = rows_.find(x);
            if (rt == rows_.end()) {
                auto jt = row.find(x);
                if (jt == row.end()) row.emplace(x, c);
                else {
                    jt->second += c;
                    if (jt->second == 0) row.erase(jt);
                }
            } else {
                for (auto& [y, w] : rt->second) {
                    auto jt = row.find(y);
                    if (jt == row.end()) row.emplace(y, c * w);
                    else {
                        jt->second += c * w;
                        if (jt->second == 0) row.erase(jt);
                    }
                }
            }
        }
        values_[s] = value;
        rows_.emplace(s, std::move(row));
        form_vars_.emplace(form, s);
        defining_form_.emplace(s, std::map<int, Rational>(form.begin(), form.end()));
        return s;
    }

public:
    /// Debug invariant: every tableau row, expanded through the defining
    /// forms of the slack variables, is an identity over the problem vars.
    bool rows_consistent() const {
        auto expand = [&](int v, const Rational& f, std::map<int, Rational>& acc) {
            auto it = defining_form_.find(v);
            if (it == defining_form_.end()) {
                acc[v] += f;
            } else {
                for (auto& [x, c] : it->second) acc[x] += f * c;
            }
        };
        for (auto& [b, row] : rows_) {
            std::map<int, Rational> acc;
            expand(b, Rational(-1), acc);
            for (auto& [x, c] : row) expand(x, c, acc);
            for (auto& [v, c] : acc)
                if (c != 0) return false;
        }
        return true;
    }

private:

    int num_problem_;
    std::vector<DRat> values_;
    std::vector<std::optional<BoundRec>> lower_, upper_;
    std::map<int, std::map<int, Rational>> rows_;  // basic var -> row over nonbasic
    std::map<int, std::map<int, Rational>> defining_form_;
    std::map<std::vector<std::pair<int, Rational>>, int> form_vars_;
    std::map<int, Atom> atoms_;
    std::vector<TrailEntry> trail_;
    std::vector<size_t> scopes_;
    AtomCombo conflict_;
    bool values_clean_ = true;
};

}  // namespace sds

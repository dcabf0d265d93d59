#pragma once

#include "sds/rational.hpp"
#include "sds/weak_order.hpp"

#include <map>
#include <string>
#include <vector>

namespace sds {

using VarId = int;

/// Variables are probabilities p_<profile>_<alt>, interned per system.
class VarTable {
public:
    VarId intern(const std::string& profile, int alt) {
        auto key = std::make_pair(profile, alt);
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        VarId id = static_cast<VarId>(vars_.size());
        vars_.push_back(key);
        ids_.emplace(std::move(key), id);
        return id;
    }

    VarId lookup(const std::string& profile, int alt) const {
        auto it = ids_.find({profile, alt});
        if (it == ids_.end())
            throw std::out_of_range("unknown variable p[" + profile + "][" + std::string(1, alt_letter(alt)) + "]");
        return it->second;
    }

    bool contains(const std::string& profile, int alt) const {
        return ids_.count({profile, alt}) > 0;
    }

    int size() const { return static_cast<int>(vars_.size()); }
    const std::string& profile_of(VarId v) const { return vars_.at(v).first; }
    int alt_of(VarId v) const { return vars_.at(v).second; }

    std::string name(VarId v) const {
        return "p_" + vars_.at(v).first + "_" + alt_letter(vars_.at(v).second);
    }

    std::string pretty(VarId v) const {
        return "p[" + vars_.at(v).first + "][" + alt_letter(vars_.at(v).second) + "]";
    }

private:
    std::vector<std::pair<std::string, int>> vars_;
    std::map<std::pair<std::string, int>, VarId> ids_;
};

/// Sparse linear expression sum(coeff * var) + constant.
struct LinExpr {
    std::map<VarId, Rational> coeff;
    Rational constant;

    void add_term(VarId v, const Rational& c) {
        auto it = coeff.find(v);
        if (it == coeff.end()) {
            if (c != 0) coeff.emplace(v, c);
            return;
        }
        it->second += c;
        if (it->second == 0) coeff.erase(it);
    }

    LinExpr& operator+=(const LinExpr& o) {
        for (auto& [v, c] : o.coeff) add_term(v, c);
        constant += o.constant;
        return *this;
    }

    LinExpr& operator-=(const LinExpr& o) {
        for (auto& [v, c] : o.coeff) add_term(v, -c);
        constant -= o.constant;
        return *this;
    }

    void scale(const Rational& f) {
        if (f == 0) {
            coeff.clear();
            constant = 0;
            return;
        }
        for (auto& [v, c] : coeff) c *= f;
        constant *= f;
    }

    Rational eval(const std::map<VarId, Rational>& assignment) const {
        Rational total = constant;
        for (auto& [v, c] : coeff) {
            auto it = assignment.find(v);
            if (it == assignment.end()) throw std::out_of_range("assignment missing a variable");
            total += c * it->second;
        }
        return total;
    }

    bool operator==(const LinExpr& o) const { return coeff == o.coeff && constant == o.constant; }
};

enum class Rel { Lt, Le, Eq };

/// expr rel 0.
struct Atom {
    LinExpr expr;
    Rel rel = Rel::Le;

    bool eval(const std::map<VarId, Rational>& assignment) const {
        Rational v = expr.eval(assignment);
        switch (rel) {
            case Rel::Lt: return v < 0;
            case Rel::Le: return v <= 0;
            case Rel::Eq: return v == 0;
        }
        return false;
    }

    bool operator==(const Atom& o) const { return rel == o.rel && expr == o.expr; }
};

/// atom(lhs rel rhs), normalized to lhs - rhs rel 0.
inline Atom make_atom(LinExpr lhs, Rel rel, const LinExpr& rhs) {
    lhs -= rhs;
    return Atom{std::move(lhs), rel};
}

/// The negation of an atom as a disjunction of atoms (two for equalities).
inline std::vector<Atom> negate_atom(const Atom& a) {
    LinExpr neg = a.expr;
    neg.scale(Rational(-1));
    switch (a.rel) {
        case Rel::Lt: return {Atom{neg, Rel::Le}};            // !(e<0) == -e<=0
        case Rel::Le: return {Atom{neg, Rel::Lt}};            // !(e<=0) == -e<0
        case Rel::Eq: return {Atom{a.expr, Rel::Lt}, Atom{neg, Rel::Lt}};
    }
    return {};
}

using Cube = std::vector<Atom>;

/// Disjunction of conjunctions; satisfied iff some cube is fully satisfied.
struct Clause {
    std::string name;
    std::vector<Cube> cubes;

    bool eval(const std::map<VarId, Rational>& assignment) const {
        for (auto& cube : cubes) {
            bool all = true;
            for (auto& atom : cube)
                if (!atom.eval(assignment)) {
                    all = false;
                    break;
                }
            if (all) return true;
        }
        return false;
    }
};

struct ConstraintSystem {
    VarTable vars;
    std::vector<Clause> clauses;
    int m = 0;
    int n = 0;
    std::string domain;  // free-form descriptor

    const Clause& clause(const std::string& name) const {
        for (auto& c : clauses)
            if (c.name == name) return c;
        throw std::out_of_range("no clause named " + name);
    }

    bool has_clause(const std::string& name) const {
        for (auto& c : clauses)
            if (c.name == name) return true;
        return false;
    }
};

// --- text forms -------------------------------------------------------------

inline std::string format_expr_side(const std::vector<std::pair<std::string, Rational>>& terms,
                                    const Rational& constant) {
    std::string out;
    for (auto& [name, c] : terms) {
        if (!out.empty()) out += " + ";
        if (c != 1) out += rat_str(c) + "*";
        out += name;
    }
    if (constant != 0 || out.empty()) {
        if (!out.empty()) out += " + ";
        out += rat_str(constant);
    }
    return out;
}

/// "p[R2][d] + p[R2][c] <= p[R1][d] + p[R1][c]" with positive terms left,
/// negative terms (negated) right, constant on the right.
inline std::string format_atom(const Atom& a, const VarTable& vars) {
    std::vector<std::pair<std::string, Rational>> lhs, rhs;
    for (auto& [v, c] : a.expr.coeff) {
        if (c > 0)
            lhs.emplace_back(vars.pretty(v), c);
        else
            rhs.emplace_back(vars.pretty(v), -c);
    }
    const char* op = a.rel == Rel::Lt ? " < " : a.rel == Rel::Le ? " <= " : " = ";
    return format_expr_side(lhs, Rational(0) > a.expr.constant ? Rational(0) : a.expr.constant) + op +
           format_expr_side(rhs, a.expr.constant < 0 ? -a.expr.constant : Rational(0));
}

inline std::string format_clause(const Clause& cl, const VarTable& vars) {
    std::string out;
    for (auto& cube : cl.cubes) {
        if (!out.empty()) out += " | ";
        if (cube.size() == 1) {
            out += format_atom(cube[0], vars);
        } else {
            out += "(";
            for (size_t i = 0; i < cube.size(); ++i) {
                if (i) out += " & ";
                out += format_atom(cube[i], vars);
            }
            out += ")";
        }
    }
    return out;
}

namespace detail {

/// Recursive-descent parser for the clause grammar:
///   clause  := cube ('|' cube)*
///   cube    := '(' atom ('&' atom)* ')' | atom
///   atom    := sum ('<=' | '<' | '=') sum
///   sum     := term (('+' | '-') term)*
///   term    := rational ['*' var] | var
///   var     := 'p[' id '][' letter ']'
class ClauseParser {
public:
    ClauseParser(const std::string& text, const VarTable& vars, bool intern, VarTable* mut_vars)
        : text_(text), vars_(vars), intern_(intern), mut_vars_(mut_vars) {}

    Clause parse_clause(const std::string& name) {
        Clause cl;
        cl.name = name;
        cl.cubes.push_back(parse_cube());
        skip_ws();
        while (peek() == '|') {
            ++pos_;
            cl.cubes.push_back(parse_cube());
            skip_ws();
        }
        if (pos_ != text_.size()) throw ParseError("trailing input in clause", pos_);
        return cl;
    }

    Atom parse_single_atom() {
        auto a = parse_atom();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("trailing input in atom", pos_);
        return a;
    }

private:
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void skip_ws() {
        while (pos_ < text_.size() && isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    Cube parse_cube() {
        Cube cube;
        if (peek() == '(') {
            ++pos_;
            cube.push_back(parse_atom());
            while (peek() == '&') {
                ++pos_;
                cube.push_back(parse_atom());
            }
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
        } else {
            cube.push_back(parse_atom());
        }
        return cube;
    }

    Atom parse_atom() {
        LinExpr lhs = parse_sum();
        skip_ws();
        Rel rel;
        if (pos_ + 1 < text_.size() && text_[pos_] == '<' && text_[pos_ + 1] == '=') {
            rel = Rel::Le;
            pos_ += 2;
        } else if (peek() == '<') {
            rel = Rel::Lt;
            ++pos_;
        } else if (peek() == '=') {
            rel = Rel::Eq;
            ++pos_;
        } else {
            throw ParseError("expected relation", pos_);
        }
        LinExpr rhs = parse_sum();
        return make_atom(std::move(lhs), rel, rhs);
    }

    LinExpr parse_sum() {
        LinExpr e = parse_term(Rational(1));
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                e += parse_term(Rational(1));
            } else if (c == '-') {
                ++pos_;
                e += parse_term(Rational(-1));
            } else {
                break;
            }
        }
        return e;
    }

    LinExpr parse_term(const Rational& sign) {
        LinExpr e;
        skip_ws();
        if (peek() == 'p') {
            e.add_term(parse_var(), sign);
            return e;
        }
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
            ++pos_;
        if (pos_ == start) throw ParseError("expected term", pos_);
        Rational value = rat_parse(text_.substr(start, pos_ - start));
        if (peek() == '*') {
            ++pos_;
            skip_ws();
            e.add_term(parse_var(), sign * value);
        } else {
            e.constant = sign * value;
        }
        return e;
    }

    VarId parse_var() {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != 'p') throw ParseError("expected variable", pos_);
        ++pos_;
        if (pos_ >= text_.size() || text_[pos_] != '[') throw ParseError("expected '['", pos_);
        ++pos_;
        size_t close = text_.find(']', pos_);
        if (close == std::string::npos) throw ParseError("expected ']'", pos_);
        std::string profile = text_.substr(pos_, close - pos_);
        pos_ = close + 1;
        if (pos_ >= text_.size() || text_[pos_] != '[') throw ParseError("expected '['", pos_);
        ++pos_;
        if (pos_ >= text_.size()) throw ParseError("expected alternative", pos_);
        int alt = alt_index(text_[pos_]);
        ++pos_;
        if (pos_ >= text_.size() || text_[pos_] != ']') throw ParseError("expected ']'", pos_);
        ++pos_;
        if (intern_) return mut_vars_->intern(profile, alt);
        return vars_.lookup(profile, alt);
    }

    const std::string& text_;
    const VarTable& vars_;
    bool intern_;
    VarTable* mut_vars_;
    size_t pos_ = 0;
};

}  // namespace detail

/// Parses a clause in the p[..][..] grammar against existing variables.
inline Clause parse_clause_text(const std::string& text, const std::string& name,
                                const VarTable& vars) {
    return detail::ClauseParser(text, vars, false, nullptr).parse_clause(name);
}

/// Same, creating variables on first use.
inline Clause parse_clause_text_interning(const std::string& text, const std::string& name,
                                          VarTable& vars) {
    return detail::ClauseParser(text, vars, true, &vars).parse_clause(name);
}

inline Atom parse_atom_text(const std::string& text, const VarTable& vars) {
    return detail::ClauseParser(text, vars, false, nullptr).parse_single_atom();
}

/// check_assignment: every clause has at least one fully satisfied cube
/// under exact evaluation. Missing variables raise.
inline bool check_assignment(const std::vector<Clause>& clauses,
                             const std::map<VarId, Rational>& assignment) {
    for (auto& cl : clauses)
        if (!cl.eval(assignment)) return false;
    return true;
}

}  // namespace sds

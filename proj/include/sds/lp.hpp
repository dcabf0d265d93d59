#pragma once

#include "sds/rational.hpp"

#include <optional>
#include <vector>

namespace sds {

enum class Cmp { Le, Eq, Ge };

struct LpConstraint {
    std::vector<Rational> coef;
    Cmp rel = Cmp::Le;
    Rational rhs;
};

/// maximize objective . x  subject to the constraints and per-variable
/// lower bounds (nullopt = free variable).
struct LinearProgram {
    std::vector<Rational> objective;
    std::vector<LpConstraint> constraints;
    std::vector<std::optional<Rational>> lower;

    int num_vars() const { return static_cast<int>(objective.size()); }

    void check_dimensions() const {
        if (lower.size() != objective.size())
            throw std::invalid_argument("lp: lower bounds dimension mismatch");
        for (auto& c : constraints)
            if (c.coef.size() != objective.size())
                throw std::invalid_argument("lp: constraint dimension mismatch");
    }
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

/// witness/dual are in the original variable/constraint space.
///   dual:   one multiplier per constraint; >= 0 for Le rows, <= 0 for Ge
///           rows, free for Eq rows.
///   farkas: same sign convention; a valid certificate combines the
///           constraints into an inequality violated by every x within the
///           lower bounds (see lp_verify_farkas).
struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::vector<Rational> witness;
    std::vector<Rational> dual;
    std::vector<Rational> farkas;
};

/// Exact infeasibility check of a Farkas certificate: the combination
/// sum_i farkas[i] * (row_i) must have coefficient 0 on free variables,
/// coefficient >= 0 on bounded variables, and a best-case left side that
/// still exceeds the combined right side.
inline bool lp_verify_farkas(const LinearProgram& lp, const std::vector<Rational>& farkas) {
    if (farkas.size() != lp.constraints.size()) return false;
    int n = lp.num_vars();
    std::vector<Rational> combined(n, Rational(0));
    Rational rhs = 0;
    for (size_t i = 0; i < farkas.size(); ++i) {
        const auto& row = lp.constraints[i];
        if (row.rel == Cmp::Le && farkas[i] < 0) return false;
        if (row.rel == Cmp::Ge && farkas[i] > 0) return false;
        if (farkas[i] == 0) continue;
        for (int j = 0; j < n; ++j) combined[j] += farkas[i] * row.coef[j];
        rhs += farkas[i] * row.rhs;
    }
    Rational min_lhs = 0;
    for (int j = 0; j < n; ++j) {
        if (combined[j] == 0) continue;
        if (!lp.lower[j].has_value()) return false;        // free var must cancel
        if (combined[j] < 0) return false;                 // lhs would be unbounded below
        min_lhs += combined[j] * *lp.lower[j];
    }
    return min_lhs > rhs;  // "min_lhs <= rhs" is required yet impossible
}

/// Exact optimality check via complementary slackness.
inline bool lp_verify_optimal(const LinearProgram& lp, const LpOutcome& out) {
    if (out.status != LpStatus::Optimal) return false;
    int n = lp.num_vars();
    if (out.witness.size() != static_cast<size_t>(n)) return false;
    if (out.dual.size() != lp.constraints.size()) return false;
    // Primal feasibility.
    for (int j = 0; j < n; ++j)
        if (lp.lower[j].has_value() && out.witness[j] < *lp.lower[j]) return false;
    std::vector<Rational> activity(lp.constraints.size(), Rational(0));
    for (size_t i = 0; i < lp.constraints.size(); ++i) {
        for (int j = 0; j < n; ++j) activity[i] += lp.constraints[i].coef[j] * out.witness[j];
        const auto& row = lp.constraints[i];
        if (row.rel == Cmp::Le && activity[i] > row.rhs) return false;
        if (row.rel == Cmp::Ge && activity[i] < row.rhs) return false;
        if (row.rel == Cmp::Eq && activity[i] != row.rhs) return false;
    }
    // Dual feasibility: sign conditions plus reduced costs z = yA - c.
    std::vector<Rational> z(n, Rational(0));
    for (size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& row = lp.constraints[i];
        if (row.rel == Cmp::Le && out.dual[i] < 0) return false;
        if (row.rel == Cmp::Ge && out.dual[i] > 0) return false;
        for (int j = 0; j < n; ++j) z[j] += out.dual[i] * row.coef[j];
    }
    for (int j = 0; j < n; ++j) {
        z[j] -= lp.objective[j];
        if (!lp.lower[j].has_value()) {
            if (z[j] != 0) return false;
        } else if (z[j] < 0) {
            return false;
        }
    }
    // Complementary slackness, exactly.
    for (size_t i = 0; i < lp.constraints.size(); ++i)
        if (out.dual[i] != 0 && activity[i] != lp.constraints[i].rhs) return false;
    for (int j = 0; j < n; ++j)
        if (z[j] != 0 && out.witness[j] != *lp.lower[j]) return false;
    // Objective consistency.
    Rational primal = 0;
    for (int j = 0; j < n; ++j) primal += lp.objective[j] * out.witness[j];
    return primal == out.value;
}

/// Row-per-constraint text dump with exact fractions, for diagnostics.
inline std::string lp_dump(const LinearProgram& lp) {
    std::string s = "max";
    for (int j = 0; j < lp.num_vars(); ++j) s += " " + rat_str(lp.objective[j]) + "*x" + std::to_string(j);
    s += "\n";
    for (auto& row : lp.constraints) {
        for (int j = 0; j < lp.num_vars(); ++j) {
            if (row.coef[j] == 0) continue;
            s += rat_str(row.coef[j]) + "*x" + std::to_string(j) + " ";
        }
        s += row.rel == Cmp::Le ? "<= " : row.rel == Cmp::Ge ? ">= " : "= ";
        s += rat_str(row.rhs) + "\n";
    }
    for (int j = 0; j < lp.num_vars(); ++j)
        s += "x" + std::to_string(j) + (lp.lower[j] ? " >= " + rat_str(*lp.lower[j]) : " free") + "\n";
    return s;
}

namespace detail {

/// Dense two-phase tableau simplex with Bland's rule over exact rationals.
class SimplexTableau {
public:
    // Internal standard form: maximize c.x, A x = b, x >= 0, b >= 0,
    // initial basis = one artificial per row.
    SimplexTableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs,
                   int structural_vars)
        : num_rows_(static_cast<int>(rows.size())), structural_(structural_vars) {
        art_begin_ = structural_;
        cols_ = structural_ + num_rows_;
        tab_.assign(num_rows_, std::vector<Rational>(cols_ + 1, Rational(0)));
        basis_.resize(num_rows_);
        for (int i = 0; i < num_rows_; ++i) {
            for (int j = 0; j < structural_; ++j) tab_[i][j] = rows[i][j];
            tab_[i][art_begin_ + i] = 1;
            tab_[i][cols_] = rhs[i];
            basis_[i] = art_begin_ + i;
        }
    }

    int num_cols() const { return cols_; }

    /// Runs Bland simplex for the given costs; artificials barred from
    /// entering when `allow_artificial` is false. Returns false on
    /// unbounded.
    bool optimize(const std::vector<Rational>& cost, bool allow_artificial) {
        int cols = num_cols();
        // Reduced-cost row r = c - c_B . T, maintained by pivoting.
        red_.assign(cols + 1, Rational(0));
        for (int j = 0; j < cols; ++j) red_[j] = cost[j];
        for (int i = 0; i < num_rows_; ++i) {
            if (cost[basis_[i]] == 0) continue;
            for (int j = 0; j <= cols; ++j) red_[j] -= cost[basis_[i]] * tab_[i][j];
        }
        while (true) {
            int enter = -1;
            for (int j = 0; j < cols; ++j) {
                if (!allow_artificial && j >= art_begin_) break;
                if (red_[j] > 0) { enter = j; break; }  // Bland: smallest index
            }
            if (enter < 0) return true;
            int leave = -1;
            Rational best_ratio;
            for (int i = 0; i < num_rows_; ++i) {
                if (tab_[i][enter] <= 0) continue;
                Rational ratio = tab_[i][cols] / tab_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;  // unbounded
            pivot(leave, enter);
        }
    }

    void pivot(int row, int col) {
        int cols = num_cols();
        Rational pv = tab_[row][col];
        for (int j = 0; j <= cols; ++j) tab_[row][j] /= pv;
        for (int i = 0; i < num_rows_; ++i) {
            if (i == row || tab_[i][col] == 0) continue;
            Rational f = tab_[i][col];
            for (int j = 0; j <= cols; ++j) tab_[i][j] -= f * tab_[row][j];
        }
        if (red_[col] != 0) {
            Rational f = red_[col];
            for (int j = 0; j <= cols; ++j) red_[j] -= f * tab_[row][j];
        }
        basis_[row] = col;
    }

    Rational objective_value(const std::vector<Rational>& cost) const {
        Rational v = 0;
        for (int i = 0; i < num_rows_; ++i) v += cost[basis_[i]] * tab_[i][num_cols()];
        return v;
    }

    /// Pivots basic artificials (necessarily at value 0 after a feasible
    /// phase 1) onto structural columns so phase 2 cannot raise them. Rows
    /// with no structural entry are inert and may keep their artificial.
    void drive_out_artificials() {
        for (int i = 0; i < num_rows_; ++i) {
            if (basis_[i] < art_begin_) continue;
            for (int j = 0; j < art_begin_; ++j) {
                if (tab_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<Rational> solution() const {
        std::vector<Rational> x(num_cols(), Rational(0));
        for (int i = 0; i < num_rows_; ++i) x[basis_[i]] = tab_[i][num_cols()];
        return x;
    }

    /// y = c_B B^-1, read off the artificial (identity) columns.
    std::vector<Rational> duals(const std::vector<Rational>& cost) const {
        std::vector<Rational> y(num_rows_, Rational(0));
        for (int i = 0; i < num_rows_; ++i)
            y[i] = cost[art_begin_ + i] - red_[art_begin_ + i];
        return y;
    }

    int art_begin() const { return art_begin_; }

private:
    int num_rows_;
    int structural_;
    int art_begin_;
    int cols_;
    std::vector<std::vector<Rational>> tab_;
    std::vector<Rational> red_;
    std::vector<int> basis_;
};

}  // namespace detail

/// Exact two-phase simplex (Bland's rule, terminating). Produces a dual
/// solution on Optimal and a Farkas certificate on Infeasible; both are
/// validated before returning.
inline LpOutcome lp_solve(const LinearProgram& lp) {
    lp.check_dimensions();
    int n = lp.num_vars();

    // Variable transform: x_j = lower_j + u_j (u_j >= 0), or x_j = u+ - u-
    // for free variables. col_of[j] = first transformed column of x_j.
    std::vector<int> col_of(n);
    int structural = 0;
    for (int j = 0; j < n; ++j) {
        col_of[j] = structural;
        structural += lp.lower[j].has_value() ? 1 : 2;
    }
    int slack_begin = structural;
    int num_slacks = 0;
    for (auto& row : lp.constraints)
        if (row.rel != Cmp::Eq) ++num_slacks;
    structural += num_slacks;

    int m = static_cast<int>(lp.constraints.size());
    std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(structural, Rational(0)));
    std::vector<Rational> rhs(m);
    std::vector<int> row_sign(m, 1);
    {
        int next_slack = slack_begin;
        for (int i = 0; i < m; ++i) {
            const auto& row = lp.constraints[i];
            Rational b = row.rhs;
            for (int j = 0; j < n; ++j) {
                if (row.coef[j] == 0) continue;
                if (lp.lower[j].has_value()) {
                    rows[i][col_of[j]] = row.coef[j];
                    b -= row.coef[j] * *lp.lower[j];
                } else {
                    rows[i][col_of[j]] = row.coef[j];
                    rows[i][col_of[j] + 1] = -row.coef[j];
                }
            }
            if (row.rel != Cmp::Eq)
                rows[i][next_slack++] = (row.rel == Cmp::Le) ? Rational(1) : Rational(-1);
            if (b < 0) {
                row_sign[i] = -1;
                for (auto& v : rows[i]) v = -v;
                b = -b;
            }
            rhs[i] = b;
        }
    }

    detail::SimplexTableau tab(std::move(rows), std::move(rhs), structural);
    int total_cols = tab.num_cols();

    // Phase 1: maximize -sum(artificials).
    std::vector<Rational> cost1(total_cols, Rational(0));
    for (int j = tab.art_begin(); j < total_cols; ++j) cost1[j] = -1;
    tab.optimize(cost1, true);

    LpOutcome out;
    if (tab.objective_value(cost1) < 0) {
        out.status = LpStatus::Infeasible;
        // Phase-1 dual y has yA >= 0 on structural columns and yb < 0;
        // undoing the row sign flips yields the certificate multipliers.
        auto y = tab.duals(cost1);
        out.farkas.resize(m);
        for (int i = 0; i < m; ++i) out.farkas[i] = Rational(row_sign[i]) * y[i];
        if (!lp_verify_farkas(lp, out.farkas))
            throw std::logic_error("lp_solve: produced invalid Farkas certificate");
        return out;
    }

    tab.drive_out_artificials();

    // Phase 2.
    std::vector<Rational> cost2(total_cols, Rational(0));
    for (int j = 0; j < n; ++j) {
        if (lp.objective[j] == 0) continue;
        cost2[col_of[j]] = lp.objective[j];
        if (!lp.lower[j].has_value()) cost2[col_of[j] + 1] = -lp.objective[j];
    }
    if (!tab.optimize(cost2, false)) {
        out.status = LpStatus::Unbounded;
        return out;
    }

    out.status = LpStatus::Optimal;
    auto u = tab.solution();
    out.witness.resize(n);
    Rational value = 0;
    for (int j = 0; j < n; ++j) {
        if (lp.lower[j].has_value())
            out.witness[j] = *lp.lower[j] + u[col_of[j]];
        else
            out.witness[j] = u[col_of[j]] - u[col_of[j] + 1];
        value += lp.objective[j] * out.witness[j];
    }
    out.value = value;
    auto y = tab.duals(cost2);
    out.dual.resize(m);
    for (int i = 0; i < m; ++i) out.dual[i] = Rational(row_sign[i]) * y[i];
    if (!lp_verify_optimal(lp, out))
        throw std::logic_error("lp_solve: produced uncertifiable optimum");
    return out;
}

}  // namespace sds

#include "packsim/lp.hpp"

#include <stdexcept>

namespace packsim {

namespace {

struct Tableau {
    int rows = 0;
    int cols = 0;  // variables including slack/artificial
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    std::vector<int> basis;
    std::vector<Rational> red;  // reduced costs
    Rational value = 0;
    std::vector<bool> blocked;  // columns barred from entering (artificials in phase 2)

    void load_costs(const std::vector<Rational>& cost) {
        red = cost;
        value = 0;
        for (int i = 0; i < rows; ++i) {
            const Rational f = cost[basis[i]];
            if (f == 0) continue;
            value += f * b[i];
            for (int j = 0; j < cols; ++j) red[j] -= f * a[i][j];
        }
    }

    void pivot(int row, int col) {
        const Rational piv = a[row][col];
        for (int j = 0; j < cols; ++j) a[row][j] /= piv;
        b[row] /= piv;
        for (int i = 0; i < rows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            const Rational f = a[i][col];
            for (int j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
        }
        if (red[col] != 0) {
            const Rational f = red[col];
            for (int j = 0; j < cols; ++j) red[j] -= f * a[row][j];
            value += f * b[row];
        }
        basis[row] = col;
    }

    // Bland: lowest-index entering column with positive reduced cost;
    // leaving row by min ratio, ties to the lowest basic variable index.
    LpStatus run() {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < cols; ++j)
                if (!blocked[j] && red[j] > 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return LpStatus::optimal;
            int leave = -1;
            Rational best;
            for (int i = 0; i < rows; ++i) {
                if (a[i][enter] <= 0) continue;
                Rational ratio = b[i] / a[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpSolution solve_lp_max(const LpProblem& problem) {
    const int m = static_cast<int>(problem.a.size());
    const int n = static_cast<int>(problem.c.size());
    if (static_cast<int>(problem.b.size()) != m || static_cast<int>(problem.senses.size()) != m)
        throw std::invalid_argument("solve_lp_max: inconsistent problem dimensions");
    for (const auto& row : problem.a)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("solve_lp_max: ragged constraint matrix");

    // Column layout: structural | slack (one per <= row) | artificial.
    int slack_count = 0;
    for (LpSense s : problem.senses)
        if (s == LpSense::le) ++slack_count;

    Tableau t;
    t.rows = m;
    std::vector<int> slack_col(m, -1), artif_col(m, -1);
    int next = n;
    for (int i = 0; i < m; ++i)
        if (problem.senses[i] == LpSense::le) slack_col[i] = next++;
    const int artif_base = next;
    // A <= row with negative rhs needs an artificial after sign flip.
    std::vector<bool> flip(m, false);
    for (int i = 0; i < m; ++i) {
        bool neg = problem.b[i] < 0;
        flip[i] = neg;
        if (problem.senses[i] == LpSense::eq || neg) artif_col[i] = next++;
    }
    t.cols = next;
    t.a.assign(m, std::vector<Rational>(t.cols, 0));
    t.b.resize(m);
    t.basis.assign(m, -1);
    t.blocked.assign(t.cols, false);

    for (int i = 0; i < m; ++i) {
        const Rational sign = flip[i] ? Rational(-1) : Rational(1);
        for (int j = 0; j < n; ++j) t.a[i][j] = sign * problem.a[i][j];
        t.b[i] = sign * problem.b[i];
        if (slack_col[i] >= 0) t.a[i][slack_col[i]] = sign;
        if (artif_col[i] >= 0) {
            t.a[i][artif_col[i]] = 1;
            t.basis[i] = artif_col[i];
        } else {
            t.basis[i] = slack_col[i];
        }
    }

    // Phase 1: maximize -(sum of artificials).
    if (artif_base < t.cols) {
        std::vector<Rational> cost(t.cols, 0);
        for (int j = artif_base; j < t.cols; ++j) cost[j] = -1;
        t.load_costs(cost);
        if (t.run() != LpStatus::optimal || t.value != 0) {
            LpSolution sol;
            sol.status = LpStatus::infeasible;
            return sol;
        }
        // Pivot degenerate artificials out; a row with no real coefficient
        // left is redundant and is dropped.
        for (int i = 0; i < t.rows;) {
            if (t.basis[i] < artif_base) {
                ++i;
                continue;
            }
            int col = -1;
            for (int j = 0; j < artif_base; ++j)
                if (t.a[i][j] != 0) {
                    col = j;
                    break;
                }
            if (col >= 0) {
                t.pivot(i, col);
                ++i;
            } else {
                t.a.erase(t.a.begin() + i);
                t.b.erase(t.b.begin() + i);
                t.basis.erase(t.basis.begin() + i);
                --t.rows;
            }
        }
        for (int j = artif_base; j < t.cols; ++j) t.blocked[j] = true;
    }

    // Phase 2.
    std::vector<Rational> cost(t.cols, 0);
    for (int j = 0; j < n; ++j) cost[j] = problem.c[j];
    t.load_costs(cost);
    LpStatus status = t.run();

    LpSolution sol;
    sol.status = status;
    if (status == LpStatus::optimal) {
        sol.value = t.value;
        sol.x.assign(n, 0);
        for (int i = 0; i < t.rows; ++i)
            if (t.basis[i] < n) sol.x[t.basis[i]] = t.b[i];
    }
    return sol;
}

}  // namespace packsim

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rational.hpp"

namespace packing3d {

enum class RowSense { le, ge, eq };

struct LpProblem {
    std::vector<std::vector<Rational>> A;  // rows x cols
    std::vector<Rational> b;
    std::vector<RowSense> sense;
    std::vector<Rational> c;  // minimized
};

struct LpSolution {
    enum class Status { optimal, infeasible, unbounded } status = Status::infeasible;
    std::vector<Rational> x;
    Rational objective = 0;
    std::size_t pivots = 0;
};

namespace detail {

// Dense two-phase tableau simplex over exact rationals. Largest reduced cost until the
// first degenerate pivot, Bland's rule from then on.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows + 1, std::vector<Rational>(cols + 1)) {}

    Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
    Rational& rhs(std::size_t r) { return t_[r][n_]; }
    Rational& obj(std::size_t c) { return t_[m_][c]; }
    std::vector<std::size_t> basis;
    std::size_t pivots = 0;

    void pivot(std::size_t r, std::size_t c) {
        ++pivots;
        Rational p = t_[r][c];
        for (auto& v : t_[r]) v /= p;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r || sgn(t_[i][c]) == 0) continue;
            Rational f = t_[i][c];
            for (std::size_t j = 0; j <= n_; ++j)
                if (sgn(t_[r][j]) != 0) t_[i][j] -= f * t_[r][j];
        }
        basis[r] = c;
    }

    // objective row holds reduced costs; minimizes over columns allowed by `usable`
    bool run(const std::vector<bool>& usable) {
        bool bland = false;
        for (;;) {
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (!usable[j] || sgn(t_[m_][j]) >= 0) continue;
                if (enter == n_ || (!bland && t_[m_][j] < t_[m_][enter])) enter = j;
                if (bland) break;
            }
            if (enter == n_) return true;
            std::size_t leave = m_;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (sgn(t_[i][enter]) <= 0) continue;
                Rational ratio = t_[i][n_] / t_[i][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) return false;
            if (sgn(best) == 0) bland = true;
            pivot(leave, enter);
        }
    }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

private:
    std::size_t m_, n_;
    std::vector<std::vector<Rational>> t_;
};

}  // namespace detail

inline LpSolution lp_minimize(const LpProblem& p) {
    const std::size_t m = p.b.size(), n = p.c.size();
    if (p.A.size() != m || p.sense.size() != m) throw PreconditionError("lp: row count mismatch");
    // columns: originals, one slack per inequality row, one artificial per row
    std::vector<std::size_t> slack_col(m, SIZE_MAX);
    std::size_t cols = n;
    for (std::size_t i = 0; i < m; ++i)
        if (p.sense[i] != RowSense::eq) slack_col[i] = cols++;
    const std::size_t art0 = cols;
    cols += m;
    detail::Tableau t(m, cols);
    t.basis.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (p.A[i].size() != n) throw PreconditionError("lp: column count mismatch");
        int flip = sgn(p.b[i]) < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) t.at(i, j) = flip * p.A[i][j];
        if (slack_col[i] != SIZE_MAX) t.at(i, slack_col[i]) = flip * (p.sense[i] == RowSense::le ? 1 : -1);
        t.at(i, art0 + i) = 1;
        t.rhs(i) = flip * p.b[i];
        t.basis[i] = art0 + i;
    }
    // phase 1: minimize the artificial sum
    for (std::size_t j = 0; j <= cols; ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (j < art0 || j == cols) s += j == cols ? t.rhs(i) : t.at(i, j);
        if (j < art0) t.obj(j) = -s;
        else if (j == cols) t.obj(j) = -s;
    }
    std::vector<bool> usable(cols, true);
    t.run(usable);
    LpSolution sol;
    if (sgn(t.obj(cols)) != 0) {
        sol.status = LpSolution::Status::infeasible;
        sol.pivots = t.pivots;
        return sol;
    }
    // drive remaining artificials out of the basis where possible
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] < art0) continue;
        for (std::size_t j = 0; j < art0; ++j)
            if (sgn(t.at(i, j)) != 0) {
                t.pivot(i, j);
                break;
            }
    }
    for (std::size_t j = art0; j < cols; ++j) usable[j] = false;
    // phase 2 objective row
    for (std::size_t j = 0; j <= cols; ++j) t.obj(j) = 0;
    for (std::size_t j = 0; j < n; ++j) t.obj(j) = p.c[j];
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t bj = t.basis[i];
        if (bj >= n || sgn(p.c[bj]) == 0) continue;
        Rational f = p.c[bj];
        for (std::size_t j = 0; j <= cols; ++j) t.obj(j) -= f * (j == cols ? t.rhs(i) : t.at(i, j));
    }
    if (!t.run(usable)) {
        sol.status = LpSolution::Status::unbounded;
        sol.pivots = t.pivots;
        return sol;
    }
    sol.status = LpSolution::Status::optimal;
    sol.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs(i);
    for (std::size_t j = 0; j < n; ++j) sol.objective += p.c[j] * sol.x[j];
    sol.pivots = t.pivots;
    return sol;
}

inline bool lp_satisfied(const LpProblem& p, const std::vector<Rational>& x) {
    for (const auto& v : x)
        if (sgn(v) < 0) return false;
    for (std::size_t i = 0; i < p.b.size(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) s += p.A[i][j] * x[j];
        if (p.sense[i] == RowSense::le && s > p.b[i]) return false;
        if (p.sense[i] == RowSense::ge && s < p.b[i]) return false;
        if (p.sense[i] == RowSense::eq && s != p.b[i]) return false;
    }
    return true;
}

inline std::size_t nonzero_count(const std::vector<Rational>& x) {
    std::size_t k = 0;
    for (const auto& v : x) k += sgn(v) != 0;
    return k;
}

}  // namespace packing3d

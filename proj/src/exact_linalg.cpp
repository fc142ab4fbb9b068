#include "mzl/exact_linalg.hpp"

#include <cstddef>

#include "mzl/error.hpp"

namespace mzl {

int rank_of(RatMat A) {
    if (A.empty()) return 0;
    std::size_t rows = A.size(), cols = A[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && A[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (A[i][c] == 0) continue;
            Rat f = A[i][c] / A[r][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

std::optional<RatVec> solve_square(RatMat A, RatVec b) {
    std::size_t n = A.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && A[piv][c] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || A[i][c] == 0) continue;
            Rat f = A[i][c] / A[c][c];
            for (std::size_t j = c; j < n; ++j) A[i][j] -= f * A[c][j];
            b[i] -= f * b[c];
        }
    }
    RatVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return x;
}

namespace {

// Dense tableau with explicit basis; obj holds reduced costs and the current
// objective value in its last slot.
struct Tableau {
    std::size_t m, n;
    RatMat T;            // m x (n+1), last column is the rhs
    RatVec obj;          // n+1
    std::vector<int> basis;

    void pivot(std::size_t row, std::size_t col) {
        Rat p = T[row][col];
        for (auto& v : T[row]) v /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || T[i][col] == 0) continue;
            Rat f = T[i][col];
            for (std::size_t j = 0; j <= n; ++j) T[i][j] -= f * T[row][j];
        }
        if (obj[col] != 0) {
            Rat f = obj[col];
            for (std::size_t j = 0; j <= n; ++j) obj[j] -= f * T[row][j];
        }
        basis[row] = static_cast<int>(col);
    }

    // Bland: entering = smallest column with positive reduced cost; leaving =
    // ratio test with smallest basic variable index on ties.
    // Returns false when unbounded.
    bool run() {
        for (;;) {
            std::size_t col = n;
            for (std::size_t j = 0; j < n; ++j)
                if (obj[j] > 0) {
                    col = j;
                    break;
                }
            if (col == n) return true;
            std::size_t row = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (T[i][col] <= 0) continue;
                if (row == m) {
                    row = i;
                    continue;
                }
                Rat cur = T[i][n] / T[i][col];
                Rat best = T[row][n] / T[row][col];
                if (cur < best || (cur == best && basis[i] < basis[row])) row = i;
            }
            if (row == m) return false;
            pivot(row, col);
        }
    }
};

}  // namespace

LPResult simplex_solve(const RatMat& A, const RatVec& b, const RatVec& c) {
    std::size_t m = A.size();
    std::size_t n = m ? A[0].size() : c.size();
    Tableau tab;
    tab.m = m;
    tab.n = n + m;  // artificials appended
    tab.T.assign(m, RatVec(tab.n + 1, Rat(0)));
    tab.basis.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        bool flip = b[i] < 0;
        for (std::size_t j = 0; j < n; ++j) tab.T[i][j] = flip ? -A[i][j] : A[i][j];
        tab.T[i][tab.n] = flip ? -b[i] : b[i];
        tab.T[i][n + i] = 1;
        tab.basis[i] = static_cast<int>(n + i);
    }
    // phase 1: maximize -(sum of artificials)
    tab.obj.assign(tab.n + 1, Rat(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= tab.n; ++j)
            if (j < n || j == tab.n) tab.obj[j] += tab.T[i][j];
    // reduced costs of artificials are zero (they are basic)
    if (!tab.run()) throw Error("phase-1 simplex unbounded (cannot happen)");
    if (tab.obj[tab.n] != 0) {
        LPResult res;
        res.status = LPResult::Status::Infeasible;
        return res;
    }
    // drive leftover artificial basics out; drop redundant rows
    for (std::size_t i = 0; i < tab.m;) {
        if (tab.basis[i] < static_cast<int>(n)) {
            ++i;
            continue;
        }
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j)
            if (tab.T[i][j] != 0) {
                col = j;
                break;
            }
        if (col < n) {
            tab.pivot(i, col);
            ++i;
        } else {
            tab.T.erase(tab.T.begin() + i);
            tab.basis.erase(tab.basis.begin() + i);
            --tab.m;
        }
    }
    // phase 2 on original columns only
    tab.n = n;
    for (auto& row : tab.T) row[n] = row[tab.T[0].size() - 1];
    for (auto& row : tab.T) row.resize(n + 1);
    tab.obj.assign(n + 1, Rat(0));
    for (std::size_t j = 0; j < n; ++j) tab.obj[j] = c[j];
    for (std::size_t i = 0; i < tab.m; ++i) {
        int bj = tab.basis[i];
        if (tab.obj[bj] == 0) continue;
        Rat f = tab.obj[bj];
        for (std::size_t j = 0; j <= n; ++j) tab.obj[j] -= f * tab.T[i][j];
    }
    LPResult res;
    if (!tab.run()) {
        res.status = LPResult::Status::Unbounded;
        return res;
    }
    res.status = LPResult::Status::Optimal;
    res.x.assign(n, Rat(0));
    for (std::size_t i = 0; i < tab.m; ++i)
        if (tab.basis[i] < static_cast<int>(n)) res.x[tab.basis[i]] = tab.T[i][n];
    res.objective = -tab.obj[n];
    return res;
}

}  // namespace mzl

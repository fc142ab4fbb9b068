#pragma once
#include <cmath>
#include <cstdint>
#include <vector>

#include "mzl/error.hpp"
#include "mzl/polyring.hpp"

namespace mzl {

// Preprocessed data for walking {m in N^n, m_i >= 1 : P(m) <= bound} with a
// polynomial that has positive coefficients and depends on every variable.
// Monotonicity in each coordinate makes the minimal completion P(prefix,1..1)
// an exact pruning bound. Integer mode keeps every membership decision exact
// via saturating 128-bit arithmetic.
struct CompiledRegion {
    int n = 0;
    std::vector<int> order;  // visit order, order[0] outermost
    std::vector<double> coef;
    std::vector<std::vector<double>> expo;  // [term][axis], original axes
    long double bound = 0;
    bool integer_mode = false;
    unsigned __int128 ibound = 0;
    std::vector<unsigned long long> icoef;
    std::vector<std::vector<long>> iexpo;

    // safe upper bound for any visited value of the given coordinate
    std::uint64_t axis_limit(int axis) const;
    std::uint64_t max_axis_limit() const;
};

CompiledRegion compile_region(const GenPoly& P, long double bound);

namespace detail {

using u128 = unsigned __int128;

inline u128 mul_sat(u128 a, u128 b, u128 cap) {
    if (a <= UINT64_MAX && b <= UINT64_MAX) {
        u128 v = a * b;
        return v > cap ? cap + 1 : v;
    }
    if (b != 0 && a > cap / b) return cap + 1;
    return a * b;
}

inline u128 pow_sat(std::uint64_t x, long e, u128 cap) {
    u128 v = 1;
    for (long i = 0; i < e; ++i) {
        v = mul_sat(v, x, cap);
        if (v > cap) return v;
    }
    return v;
}

template <class Visit>
struct RegionWalker {
    const CompiledRegion& R;
    Visit& visit;
    std::uint64_t max_points;
    std::uint64_t count = 0;
    std::vector<std::uint64_t> m;
    // partial[d][k]: coef_k times the powers of the first d fixed axes
    std::vector<std::vector<long double>> dpart;
    std::vector<std::vector<u128>> ipart;

    RegionWalker(const CompiledRegion& r, Visit& v, std::uint64_t mp)
        : R(r), visit(v), max_points(mp), m(r.n, 1) {
        std::size_t nt = R.coef.size();
        if (R.integer_mode) {
            ipart.assign(R.n + 1, std::vector<u128>(nt));
            for (std::size_t k = 0; k < nt; ++k) ipart[0][k] = R.icoef[k];
        } else {
            dpart.assign(R.n + 1, std::vector<long double>(nt));
            for (std::size_t k = 0; k < nt; ++k) dpart[0][k] = R.coef[k];
        }
    }

    // nt <= 64 and ibound < 2^120, so the plain sum of saturated partials
    // cannot wrap
    void descend_int(int depth, std::uint64_t lo, std::uint64_t hi) {
        int axis = R.order[depth];
        std::size_t nt = R.icoef.size();
        for (std::uint64_t x = lo; x <= hi; ++x) {
            u128 minval = 0;
            for (std::size_t k = 0; k < nt; ++k) {
                u128 pw = pow_sat(x, R.iexpo[k][axis], R.ibound);
                u128 p = mul_sat(ipart[depth][k], pw, R.ibound);
                ipart[depth + 1][k] = p;
                minval += p;
            }
            if (minval > R.ibound) break;
            m[axis] = x;
            if (depth + 1 == R.n) {
                if (++count > max_points)
                    throw BudgetError("enumeration budget exceeded");
                visit(static_cast<const std::uint64_t*>(m.data()));
            } else {
                descend_int(depth + 1, 1, UINT64_MAX);
            }
        }
        m[axis] = 1;
    }

    void descend_real(int depth, std::uint64_t lo, std::uint64_t hi) {
        int axis = R.order[depth];
        std::size_t nt = R.coef.size();
        for (std::uint64_t x = lo; x <= hi; ++x) {
            long double minval = 0;
            auto xd = static_cast<long double>(x);
            for (std::size_t k = 0; k < nt; ++k) {
                long double p =
                    dpart[depth][k] *
                    std::pow(xd, static_cast<long double>(R.expo[k][axis]));
                dpart[depth + 1][k] = p;
                minval += p;
            }
            if (minval > R.bound) break;
            m[axis] = x;
            if (depth + 1 == R.n) {
                if (++count > max_points)
                    throw BudgetError("enumeration budget exceeded");
                visit(static_cast<const std::uint64_t*>(m.data()));
            } else {
                descend_real(depth + 1, 1, UINT64_MAX);
            }
        }
        m[axis] = 1;
    }
};

}  // namespace detail

// Visits each member point once, outermost axis (R.order[0]) restricted to
// [first_lo, first_hi]; returns the number of points visited. Visit receives
// the coordinates in original axis numbering.
template <class Visit>
std::uint64_t enumerate_region(const CompiledRegion& R, std::uint64_t first_lo,
                               std::uint64_t first_hi,
                               std::uint64_t max_points, Visit&& visit) {
    if (R.n == 0) return 0;
    detail::RegionWalker<Visit> w(R, visit, max_points);
    if (first_lo < 1) first_lo = 1;
    if (R.integer_mode)
        w.descend_int(0, first_lo, first_hi);
    else
        w.descend_real(0, first_lo, first_hi);
    return w.count;
}

}  // namespace mzl

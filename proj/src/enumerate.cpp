#include "mzl/enumerate.hpp"

#include <algorithm>
#include <cmath>

#include "mzl/rational.hpp"

namespace mzl {

std::uint64_t CompiledRegion::axis_limit(int axis) const {
    // every visited x satisfies coef_k * x^{e} <= bound for each term with
    // e > 0; the least such bound is safe to oversize slightly
    long double best = -1;
    for (std::size_t k = 0; k < coef.size(); ++k) {
        double e = expo[k][axis];
        if (e <= 0) continue;
        long double b = powl(bound / coef[k], 1.0L / e);
        if (best < 0 || b < best) best = b;
    }
    if (best < 0) return 0;  // cannot happen for depends-on-all polynomials
    if (best > 1e18L) return UINT64_MAX;
    auto v = static_cast<std::uint64_t>(
        floorl(best * (1.0L + 1e-12L)) + 2);
    return v;
}

std::uint64_t CompiledRegion::max_axis_limit() const {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v = std::max(v, axis_limit(i));
    return v;
}

CompiledRegion compile_region(const GenPoly& P, long double bound) {
    if (P.n < 1 || P.terms.empty())
        throw DomainError("region needs a nonempty polynomial");
    CompiledRegion R;
    R.n = P.n;
    R.bound = bound;

    bool int_ok = P.terms.size() <= 64 && bound < ldexpl(1.0L, 120);
    for (const auto& [e, c] : P.terms) {
        if (c <= 0) throw DomainError("positive coefficients required");
        R.coef.push_back(c);
        std::vector<double> row;
        for (const auto& q : e) {
            if (q < 0) throw DomainError("negative exponent in region");
            row.push_back(to_double(q));
        }
        R.expo.push_back(row);
        if (c != std::floor(c) || c > 4.6e18) int_ok = false;
        for (const auto& q : e)
            if (!is_integer(q) || q > 60) int_ok = false;
    }
    // pruning requires every axis to occur in some term
    for (int i = 0; i < R.n; ++i) {
        bool seen = false;
        for (const auto& row : R.expo) seen = seen || row[i] > 0;
        if (!seen)
            throw DomainError("region polynomial must depend on every variable");
    }
    R.integer_mode = int_ok && bound >= 0;
    if (R.integer_mode) {
        R.ibound = static_cast<detail::u128>(
            floorl(bound * (1.0L + 4e-15L) + 1e-9L));
        for (const auto& [e, c] : P.terms) {
            R.icoef.push_back(static_cast<unsigned long long>(
                std::llround(c)));
            std::vector<long> row;
            for (const auto& q : e) row.push_back(floor_long(q));
            R.iexpo.push_back(row);
        }
    }
    // most constrained coordinate first: highest max exponent, then lowest
    // axis limit, then index
    R.order.resize(R.n);
    for (int i = 0; i < R.n; ++i) R.order[i] = i;
    std::vector<double> maxe(R.n, 0);
    for (const auto& row : R.expo)
        for (int i = 0; i < R.n; ++i) maxe[i] = std::max(maxe[i], row[i]);
    std::stable_sort(R.order.begin(), R.order.end(), [&](int a, int b) {
        if (maxe[a] != maxe[b]) return maxe[a] > maxe[b];
        return a < b;
    });
    return R;
}

}  // namespace mzl

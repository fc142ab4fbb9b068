#include "mzl/counting.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "mzl/constants.hpp"
#include "mzl/enumerate.hpp"
#include "mzl/error.hpp"
#include "mzl/exact_linalg.hpp"
#include "mzl/newton.hpp"

namespace mzl {

namespace {

struct Kahan {
    double s = 0, c = 0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

std::string num(double v) {
    std::ostringstream o;
    o << std::setprecision(12) << v;
    return o.str();
}

RatVec to_ratvec(const std::vector<long>& e) {
    RatVec v;
    v.reserve(e.size());
    for (long x : e) v.emplace_back(x);
    return v;
}

std::vector<RatVec> to_ratvecs(const std::vector<std::vector<long>>& I) {
    std::vector<RatVec> out;
    out.reserve(I.size());
    for (const auto& row : I) out.push_back(to_ratvec(row));
    return out;
}

// Inequality normals of the boundary surface of f: the first-meet rows of
// the descriptor plus, for table-backed kinds, every nonzero valuation
// pattern. Patterns off the diagonal face only ever add constraints that
// are redundant or binding, never wrong, so the infimum below is exact.
std::vector<RatVec> boundary_inequalities(const ArithmeticFunction& f,
                                          const FiniteTypeDescriptor& D) {
    std::set<RatVec> seen;
    std::vector<RatVec> out;
    for (const auto& row : to_ratvecs(D.I))
        if (seen.insert(row).second) out.push_back(row);
    for (const auto& [nu, v] : f.table) {
        if (v == 0.0) continue;
        RatVec row = to_ratvec(nu);
        if (seen.insert(row).second) out.push_back(std::move(row));
    }
    return out;
}

struct InfimumResult {
    Rat value;
    bool attained;
};

// inf |y| over {y : <beta,y> >= 1 for all beta} cap con*(supp), solved over
// the closed cone (same infimum); attainment asks for a minimizer with a
// strictly positive generator combination.
InfimumResult growth_infimum(const std::vector<RatVec>& I,
                             const std::vector<RatVec>& supp) {
    int q = static_cast<int>(supp.size());
    int m = static_cast<int>(I.size());
    // variables: generator weights lambda_k, surplus per inequality
    RatMat A(m, RatVec(q + m, Rat(0)));
    RatVec b(m, Rat(1));
    RatVec cobj(q + m, Rat(0));
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < q; ++k) A[i][k] = dot(I[i], supp[k]);
        A[i][q + i] = -1;
    }
    for (int k = 0; k < q; ++k) cobj[k] = -sum(supp[k]);
    LPResult lp = simplex_solve(A, b, cobj);
    if (lp.status != LPResult::Status::Optimal)
        throw DomainError("growth exponent: boundary section is empty");
    Rat iota = -lp.objective;

    // maximize the uniform floor t of the weights at the fixed optimal norm;
    // t > 0 exhibits a minimizer interior to the cone
    RatMat A2(m + 1, RatVec(1 + q + m, Rat(0)));
    RatVec b2(m + 1, Rat(1));
    RatVec c2(1 + q + m, Rat(0));
    c2[0] = 1;
    for (int i = 0; i < m; ++i) {
        Rat trow = 0;
        for (int k = 0; k < q; ++k) {
            Rat dk = dot(I[i], supp[k]);
            A2[i][1 + k] = dk;
            trow += dk;
        }
        A2[i][0] = trow;
        A2[i][1 + q + i] = -1;
    }
    Rat tnorm = 0;
    for (int k = 0; k < q; ++k) {
        Rat nk = sum(supp[k]);
        A2[m][1 + k] = nk;
        tnorm += nk;
    }
    A2[m][0] = tnorm;
    b2[m] = iota;
    LPResult lp2 = simplex_solve(A2, b2, c2);
    bool attained =
        lp2.status == LPResult::Status::Optimal && lp2.objective > 0;
    return {iota, attained};
}

}  // namespace

double count(const ArithmeticFunction& f, const GenPoly& P, double t,
             const CountOptions& opt) {
    if (P.n < 1 || P.terms.empty())
        throw DomainError("count needs a nonempty polynomial");
    if (f.n != P.n) throw DomainError("count: arity mismatch between f and P");
    if (!std::isfinite(t)) throw DomainError("count: t must be finite");
    if (t <= 0) return 0.0;

    Rat d = poly_degree(P);
    long double bound =
        powl(static_cast<long double>(t), static_cast<long double>(to_double(d)));
    CompiledRegion R = compile_region(P, bound);

    // the per-axis ranges alone already lower-bound the visit count, and the
    // weight tables are sized by them; refuse before allocating
    if (R.max_axis_limit() > opt.max_points + 64)
        throw BudgetError("enumeration budget exceeded");

    std::optional<WeightOracle> oracle;
    if (f.kind != FnKind::Unit) oracle.emplace(f, R.max_axis_limit());

    // fixed chunk layout on the outermost coordinate: per-chunk sums are
    // merged in index order, so the value is independent of the thread count
    std::uint64_t L = R.axis_limit(R.order[0]);
    int K = static_cast<int>(std::min<std::uint64_t>(64, L));
    std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
    for (int j = 0; j < K; ++j) {
        using u128 = unsigned __int128;
        auto lo = static_cast<std::uint64_t>(u128(L) * j / K) + 1;
        auto hi = static_cast<std::uint64_t>(u128(L) * (j + 1) / K);
        if (lo <= hi) spans.emplace_back(lo, hi);
    }

    std::vector<double> csum(spans.size(), 0.0);
    std::vector<std::uint64_t> cvisited(spans.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr eptr;
    std::mutex emu;

    auto worker = [&]() {
        for (;;) {
            if (stop.load(std::memory_order_relaxed)) return;
            std::size_t j = next.fetch_add(1);
            if (j >= spans.size()) return;
            try {
                Kahan s;
                auto visit = [&](const std::uint64_t* m) {
                    s.add(oracle ? (*oracle)(m) : 1.0);
                };
                cvisited[j] = enumerate_region(R, spans[j].first,
                                               spans[j].second,
                                               opt.max_points, visit);
                csum[j] = s.s;
            } catch (...) {
                {
                    std::lock_guard<std::mutex> g(emu);
                    if (!eptr) eptr = std::current_exception();
                }
                stop.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    int workers = std::max(1, std::min<int>(opt.threads,
                                            static_cast<int>(spans.size())));
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (eptr) std::rethrow_exception(eptr);

    std::uint64_t total = 0;
    for (auto v : cvisited) total += v;
    if (total > opt.max_points)
        throw BudgetError("enumeration budget exceeded");

    Kahan out;
    for (double v : csum) out.add(v);
    return out.s;
}

AsymptoticPrediction predict(const ArithmeticFunction& f, const GenPoly& P,
                             double rel_tol) {
    if (P.n < 1 || P.terms.empty())
        throw DomainError("predict needs a nonempty polynomial");
    if (f.n != P.n)
        throw DomainError("predict: arity mismatch between f and P");
    for (const auto& [e, c] : P.terms)
        if (c <= 0) throw DomainError("predict: positive coefficients required");
    if (!is_homogeneous(P))
        throw DomainError("predict requires a homogeneous polynomial");
    Rat d = poly_degree(P);
    if (d <= 0) throw DomainError("predict: degree must be positive");

    FiniteTypeDescriptor D = finite_type_descriptor(f);
    std::vector<RatVec> supp = support(P);

    AsymptoticPrediction out;
    ConeMembership section = cone_membership(D.c, supp, /*open=*/true);
    if (!section.inside) {
        out.refused = true;
        InfimumResult inf = growth_infimum(boundary_inequalities(f, D), supp);
        out.iota = inf.value;
        out.iota_attained = inf.attained;
        out.provenance.push_back(
            "refused: the distinguished point c = " + vec_to_string(D.c) +
            " is not interior to cone(supp P); no leading constant applies");
        out.provenance.push_back(
            "upper bound only: growth exponent " + rat_to_string(out.iota) +
            std::string(inf.attained ? " (infimum attained)"
                                     : " (infimum not attained)"));
        return out;
    }

    out.iota = D.iota;
    PolarType T{D.n, to_ratvecs(D.I), D.u};
    MixedData mx = mixed_exponents(T, P);
    out.rho = mx.rho0_TP;
    out.provenance.push_back("section nonempty: c = " + vec_to_string(D.c) +
                             " is interior to cone(supp P)");

    ConeMembership diag =
        cone_membership(RatVec(D.n, Rat(1)), T.I, /*open=*/true);
    out.provenance.push_back(
        std::string("diagonal interiority (1 in relint cone(I_c)): ") +
        (diag.inside ? "verified" : "FAILED"));

    int rk = rank_of(T.I);
    if (rk == D.n) {
        out.provenance.push_back(
            "pairing factorization: verified (rank I_c = n)");
    } else {
        out.provenance.push_back(
            "pairing factorization: unverified (rank I_c = " +
            std::to_string(rk) + " < n), assumed");
    }

    EulerProduct H = h_at_zero(f, D.c, std::max(0.1 * rel_tol, 1e-12));
    out.provenance.push_back(
        "leading factor H = " + num(H.value) + " +- " + num(H.tail_bound) +
        (std::fabs(H.value) > H.tail_bound ? ": nonzero verified"
                                           : ": nonvanishing UNVERIFIED"));

    ConstantEstimate A = mixed_volume_constant(T, P, rel_tol);
    double drho = std::pow(to_double(d), out.rho);
    out.C = H.value * drho * A.value;
    out.C_err = drho * (std::fabs(H.value) * A.error +
                        H.tail_bound * (std::fabs(A.value) + A.error));
    double fact = 1;
    for (int i = 2; i < out.rho; ++i) fact *= i;
    double denom = to_double(out.iota) * fact;
    out.C0 = out.C / denom;
    out.C0_err = out.C_err / denom;
    out.provenance.push_back("constant: C = H * d^rho * A0, d = " +
                             rat_to_string(d) + ", rho = " +
                             std::to_string(out.rho) + ", A0 = " +
                             num(A.value) + " +- " + num(A.error));
    return out;
}

CountReport convergence_report(const ArithmeticFunction& f, const GenPoly& P,
                               const std::vector<double>& t_grid,
                               const CountOptions& opt, double ratio_tol) {
    if (t_grid.empty()) throw DomainError("convergence report: empty grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0) || !std::isfinite(t_grid[i]))
            throw DomainError("convergence report: grid must be positive");
        if (i > 0 && t_grid[i] <= t_grid[i - 1])
            throw DomainError("convergence report: grid must be increasing");
    }

    CountReport rep;
    rep.t_grid = t_grid;
    rep.ratio_tol = ratio_tol;
    rep.prediction = predict(f, P);
    if (rep.prediction.refused)
        throw DomainError("convergence report: " +
                          rep.prediction.provenance.front());
    const auto& pr = rep.prediction;
    double iota = to_double(pr.iota);
    if (pr.rho > 1 && t_grid.front() <= 1.0)
        throw DomainError(
            "convergence report: grid must exceed 1 under logarithmic growth");

    for (double t : t_grid) {
        auto t0 = std::chrono::steady_clock::now();
        double N = count(f, P, t, opt);
        auto t1 = std::chrono::steady_clock::now();
        rep.counts.push_back(N);
        rep.wall_times.push_back(
            std::chrono::duration<double>(t1 - t0).count());
        double pred = pr.C0 * std::pow(t, iota) *
                      std::pow(std::log(t), pr.rho - 1);
        rep.predictions.push_back(pred);
        rep.ratios.push_back(N / pred);
    }

    // log-log slope over the top half of the grid
    std::size_t K = t_grid.size();
    std::size_t i0 = K >= 2 ? std::min(K / 2, K - 2) : K;
    std::vector<double> lx, ly;
    for (std::size_t i = i0; i < K; ++i) {
        if (rep.counts[i] > 0) {
            lx.push_back(std::log(t_grid[i]));
            ly.push_back(std::log(rep.counts[i]));
        }
    }
    if (lx.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= lx.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        rep.fitted_exponent = sxy / sxx;
    }
    rep.pass = std::fabs(rep.ratios.back() - 1.0) <= ratio_tol;
    return rep;
}

}  // namespace mzl

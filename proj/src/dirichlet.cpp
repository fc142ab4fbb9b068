#include "mzl/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mzl/error.hpp"
#include "mzl/newton.hpp"
#include "mzl/quadrature.hpp"
#include "mzl/special.hpp"

namespace mzl {

namespace {

struct Kahan {
    double s = 0, c = 0;
    void add(double v) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

Rat sigma0_exact(const std::vector<RatVec>& supp) {
    return diagonal_face(polyhedron_at_infinity(supp)).sigma0;
}

// polynomial restricted to a coordinate subset, in log-friendly form
struct TermList {
    int r = 0;
    std::vector<double> logc;
    std::vector<std::vector<double>> ga;  // [term][free axis]
    double sigma0 = 0;
};

double log_eval(const TermList& Q, const double* t, const double* shift) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < Q.logc.size(); ++k) {
        double v = Q.logc[k];
        for (int i = 0; i < Q.r; ++i) v += Q.ga[k][i] * (t[i] + shift[i]);
        if (v > best) best = v;
    }
    double acc = 0;
    for (std::size_t k = 0; k < Q.logc.size(); ++k) {
        double v = Q.logc[k];
        for (int i = 0; i < Q.r; ++i) v += Q.ga[k][i] * (t[i] + shift[i]);
        acc += std::exp(v - best);
    }
    return best + std::log(acc);
}

// integral over prod_i [L_i, inf) of prod_i x_i^{tpow_i - 1} * Q(x)^{-s} dx
// after x_i = L_i exp(t_i); shift_i = log L_i. Valid when the l1 decay rate
// s/sigma0' - 1 is positive, sigma0' = sigma0 * max tpow.
ValueWithError tail_integral(const TermList& Q, const std::vector<double>& shift,
                             double s, const std::vector<double>& tpow,
                             double rel_tol, int max_panels = 2500) {
    double tmax = 1;
    for (double t : tpow) tmax = std::max(tmax, t);
    double sig_eff = Q.sigma0 * tmax;
    if (s <= sig_eff * (1 + 1e-12) + 1e-300)
        throw DomainError("tail integral diverges at s = " + std::to_string(s));
    if (Q.r == 0) {
        double lq = log_eval(Q, nullptr, nullptr);
        return {std::exp(-s * lq), 0.0};
    }
    double rate = (s - sig_eff) / sig_eff;
    double L = -std::log(rel_tol * 0.1) + 10;
    double T = (L + Q.r * std::log1p(L / rate)) / rate;
    double rel_lvl = rel_tol / (1.0 + Q.r);

    std::vector<double> t(Q.r, 0.0);
    // nested adaptive panels, innermost integrates the weight directly
    std::function<double(int)> level = [&](int i) -> double {
        if (i == Q.r) {
            double ex = -s * log_eval(Q, t.data(), shift.data());
            for (int j = 0; j < Q.r; ++j) ex += tpow[j] * t[j];
            return std::exp(ex);
        }
        auto f = [&](double x) {
            t[i] = x;
            return level(i + 1);
        };
        return integrate_adaptive<double>(f, 0.0, T, rel_lvl, 0.0, max_panels)
            .value;
    };
    auto f0 = [&](double x) {
        t[0] = x;
        return level(1);
    };
    auto res =
        integrate_adaptive<double>(f0, 0.0, T, rel_lvl, 0.0, max_panels);
    double lscale = 0;
    for (int i = 0; i < Q.r; ++i) lscale += tpow[i] * shift[i];
    double scale = std::exp(lscale);
    double err = res.error + std::abs(res.value) * rel_lvl * (Q.r - 1) +
                 std::abs(res.value) * rel_tol * 0.1;  // truncation margin
    return {res.value * scale, err * scale};
}

// terms of P grouped by their exponents on the free axes A
struct SectionPlan {
    std::vector<int> free_axes;
    std::vector<int> fixed_axes;
    std::vector<std::vector<double>> gfree;  // [group][free axis]
    // member: (log coef, exponent row over fixed axes)
    std::vector<std::vector<std::pair<double, std::vector<double>>>> members;
    double sigma0 = 0;
};

SectionPlan make_plan(const GenPoly& P, const std::vector<int>& A) {
    SectionPlan plan;
    plan.free_axes = A;
    std::vector<char> in_A(P.n, 0);
    for (int a : A) in_A[a] = 1;
    for (int i = 0; i < P.n; ++i)
        if (!in_A[i]) plan.fixed_axes.push_back(i);

    std::map<RatVec, std::size_t> group_of;
    std::vector<RatVec> gexact;
    for (const auto& [e, c] : P.terms) {
        RatVec key;
        for (int a : A) key.push_back(e[a]);
        auto [it, fresh] = group_of.try_emplace(key, gexact.size());
        if (fresh) {
            gexact.push_back(key);
            std::vector<double> row;
            for (const auto& q : key) row.push_back(to_double(q));
            plan.gfree.push_back(row);
            plan.members.emplace_back();
        }
        std::vector<double> fixed_row;
        for (int i : plan.fixed_axes) fixed_row.push_back(to_double(e[i]));
        plan.members[it->second].emplace_back(std::log(c),
                                              std::move(fixed_row));
    }
    plan.sigma0 = to_double(sigma0_exact(gexact));
    return plan;
}

// instantiate the section at fixed coordinate values (log scale)
void instantiate(const SectionPlan& plan, const double* logfix, TermList& Q) {
    std::size_t G = plan.gfree.size();
    Q.r = static_cast<int>(plan.free_axes.size());
    Q.sigma0 = plan.sigma0;
    Q.ga = plan.gfree;
    Q.logc.resize(G);
    for (std::size_t g = 0; g < G; ++g) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& [lc, row] : plan.members[g]) {
            double v = lc;
            for (std::size_t j = 0; j < row.size(); ++j)
                v += row[j] * logfix[j];
            best = std::max(best, v);
        }
        double acc = 0;
        for (const auto& [lc, row] : plan.members[g]) {
            double v = lc;
            for (std::size_t j = 0; j < row.size(); ++j)
                v += row[j] * logfix[j];
            acc += std::exp(v - best);
        }
        Q.logc[g] = best + std::log(acc);
    }
}

// per-axis envelope |f(m)| <= B * m^kappa on each coordinate
struct Envelope {
    double kappa = 0;
    double B = 1;
};

Envelope envelope_of(const ArithmeticFunction& f) {
    switch (f.kind) {
        case FnKind::Unit:
        case FnKind::ComponentwiseKfree:
        case FnKind::ProductKfree:
            return {0.0, 1.0};
        case FnKind::MangoldtProduct:
        case FnKind::LogprimeProduct:
            // log x <= 10 x^{0.1} on [1, inf)
            return {0.1, 10.0};
        case FnKind::UniformMultiplicative: {
            double mx = 1;
            for (const auto& [nu, v] : f.table) mx = std::max(mx, std::abs(v));
            // one table factor per prime divisor, omega(m) <= log2(prod m_i)
            return {std::log2(mx) + 0.0, 1.0};
        }
    }
    return {0.0, 1.0};
}

struct ZAccum {
    Kahan value;
    double err = 0;
};

}  // namespace

ValueWithError eval_Y(const GenPoly& P, double s, double rel_tol) {
    if (P.n < 1 || P.terms.empty()) throw DomainError("eval_Y: empty polynomial");
    double sig0 = to_double(sigma0_exact(support(P)));
    if (s <= sig0 * (1 + 1e-12) + 1e-300)
        throw DomainError("Y diverges: s <= sigma0 = " + std::to_string(sig0));
    std::vector<int> all(P.n);
    for (int i = 0; i < P.n; ++i) all[i] = i;
    SectionPlan plan = make_plan(P, all);
    TermList Q;
    instantiate(plan, nullptr, Q);
    std::vector<double> shift(P.n, 0.0), tpow(P.n, 1.0);
    int panels = P.n >= 3 ? 1200 : 2500;
    return tail_integral(Q, shift, s, tpow, rel_tol, panels);
}

ValueWithError eval_Z(const ArithmeticFunction& f, const GenPoly& P, double s,
                      double rel_tol, std::uint64_t max_points) {
    if (f.n != P.n) throw DomainError("eval_Z: arity mismatch");
    int n = P.n;
    double d = to_double(poly_degree(P));
    double sig0 = to_double(sigma0_exact(support(P)));
    double absc = d * sig0;
    if (s < absc + 0.05 - 1e-12)
        throw DomainError("eval_Z needs s >= " + std::to_string(absc) +
                          " + 0.05");
    double sigma = s / d;

    std::uint64_t M;
    switch (n) {
        case 1: M = 8192; break;
        case 2: M = 2048; break;
        case 3: M = 160; break;
        default: throw BudgetError("eval_Z supports up to 3 variables");
    }
    while (M > 32 && std::pow(static_cast<double>(M), n) >
                         static_cast<double>(max_points))
        M /= 2;

    bool unit = f.kind == FnKind::Unit;
    Envelope env = envelope_of(f);
    if (!unit && env.kappa > 0) {
        // envelope shifts the strip abscissa; demand convergence there
        if (sigma <= sig0 * (1 + env.kappa) + 1e-9)
            throw BudgetError(
                "eval_Z: envelope tail not convergent this close to the "
                "abscissa");
    }

    WeightOracle oracle(f, unit ? 1 : M);
    CompiledPoly cp = compile_poly(P);

    // exact box sum over [1,M]^n
    ZAccum acc;
    {
        std::vector<double> x(n, 1.0);
        std::vector<std::uint64_t> m(n, 1);
        for (;;) {
            double pv = cp.eval(x.data());
            double w = std::pow(pv, -sigma);
            if (!unit) w *= oracle(m.data());
            acc.value.add(w);
            int i = 0;
            while (i < n && ++m[i] > M) {
                m[i] = 1;
                x[i] = 1.0;
                ++i;
            }
            if (i == n) break;
            x[i] = static_cast<double>(m[i]);
        }
    }

    // boundary strips: partition of the complement of the box by the set A
    // of coordinates exceeding M
    double Lb = static_cast<double>(M) + 0.5;
    double logL = std::log(Lb);
    double strip_rtol = std::min(1e-8, rel_tol * 0.05);
    double emax = 0;
    for (const auto& [e, c] : P.terms)
        for (const auto& q : e) emax = std::max(emax, to_double(q));

    double strips = 0, strip_err = 0, corrections = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> A;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) A.push_back(i);
        SectionPlan plan = make_plan(P, A);
        int r = static_cast<int>(A.size());
        std::vector<double> shift(r, logL);
        std::vector<double> tpow(r, 1.0 + env.kappa);
        int panels = r <= 1 ? 2500 : (r == 2 ? 500 : 150);

        // walk the box values of the fixed coordinates
        std::size_t nb = plan.fixed_axes.size();
        std::vector<std::uint64_t> mb(nb, 1);
        std::vector<double> logfix(nb, 0.0);
        TermList Q;
        double mass = 0;
        for (;;) {
            instantiate(plan, logfix.data(), Q);
            auto ti = tail_integral(Q, shift, sigma, tpow, strip_rtol, panels);
            double fixed_env = 1;
            if (!unit)
                for (std::size_t j = 0; j < nb; ++j)
                    fixed_env *= env.B * std::exp(env.kappa * logfix[j]);
            double free_env = unit ? 1 : std::pow(env.B, r);
            mass += ti.value * fixed_env * free_env;
            strip_err += ti.error * fixed_env * free_env;

            std::size_t i = 0;
            while (i < nb && ++mb[i] > M) {
                mb[i] = 1;
                logfix[i] = 0.0;
                ++i;
            }
            if (i == nb) break;
            logfix[i] = std::log(static_cast<double>(mb[i]));
        }
        strips += mass;

        if (unit && r == 1) {
            // midpoint correction: sum = integral + g'(M+1/2)/24 per strip,
            // g'(x) = -sigma P^{-sigma-1} dP/dx_i
            int axis = A[0];
            std::vector<std::pair<double, std::vector<Rat>>> dterms;
            for (const auto& [e, c] : P.terms)
                if (e[axis] > 0) {
                    auto ed = e;
                    ed[axis] -= 1;
                    dterms.emplace_back(c * to_double(e[axis]), ed);
                }
            std::vector<double> xv(n, 1.0);
            xv[axis] = Lb;
            std::vector<std::uint64_t> mb2(nb, 1);
            double corr = 0;
            for (;;) {
                double pv = cp.eval(xv.data());
                double dp = 0;
                for (const auto& [c, e] : dterms) {
                    double t = c;
                    for (int i = 0; i < n; ++i)
                        t *= std::pow(xv[i], to_double(e[i]));
                    dp += t;
                }
                corr -= sigma / 24.0 * std::pow(pv, -sigma - 1.0) * dp;
                std::size_t i = 0;
                while (i < nb && ++mb2[i] > M) {
                    mb2[i] = 1;
                    xv[plan.fixed_axes[i]] = 1.0;
                    ++i;
                }
                if (i == nb) break;
                xv[plan.fixed_axes[i]] = static_cast<double>(mb2[i]);
            }
            corrections += corr;
            strip_err += std::abs(corr) * (sigma + 2) * (sigma + 2) *
                         emax * emax / (Lb * Lb) * 0.1;
        } else if (unit) {
            // corrections for multi-axis strips are skipped; account for them
            strip_err += std::abs(mass) * sigma * emax * r / (24.0 * Lb) * 1.2;
        }
    }

    ValueWithError out;
    if (unit) {
        out.value = acc.value.s + strips + corrections;
        out.error = strip_err + std::abs(out.value) * 1e-14;
    } else {
        out.value = acc.value.s;
        out.error = strips + strip_err;  // positive tail, reported not added
    }
    return out;
}

SeriesEvaluator make_Y_evaluator(const GenPoly& P, double rel_tol) {
    SeriesEvaluator E;
    E.name = "Y(" + render_poly(P) + ")";
    E.abscissa = to_double(sigma0_exact(support(P)));
    E.min_offset = 1.0 / 512;
    E.evaluate = [P, rel_tol](double s) { return eval_Y(P, s, rel_tol); };
    return E;
}

SeriesEvaluator make_Z_evaluator(const ArithmeticFunction& f,
                                 const GenPoly& P, double rel_tol) {
    SeriesEvaluator E;
    E.name = "Z(" + f.name + ";" + render_poly(P) + ")";
    double d = to_double(poly_degree(P));
    E.abscissa = d * to_double(sigma0_exact(support(P)));
    E.min_offset = 0.05;
    E.evaluate = [f, P, rel_tol](double s) { return eval_Z(f, P, s, rel_tol); };
    return E;
}

PoleFit pole_fit(const SeriesEvaluator& E, double a, int q_max, double h,
                 int J) {
    if (q_max < 1 || J < 2 || h <= 0)
        throw DomainError("pole_fit: bad ladder parameters");
    // keep every rung reachable: widen the ladder rather than shortening it
    // when the evaluator cannot approach the abscissa
    if (E.min_offset > 0)
        h = std::max(h, E.min_offset * std::ldexp(1.0, J) * (1 + 1e-9));

    std::vector<double> x(J + 1), v(J + 1), verr(J + 1);
    for (int j = 0; j <= J; ++j) {
        x[j] = h * std::ldexp(1.0, -j);
        auto r = E.evaluate(a + x[j]);
        v[j] = r.value;
        verr[j] = r.error;
    }
    auto neville0 = [&](const std::vector<double>& g, int up) {
        std::vector<double> T(g.begin(), g.begin() + up + 1);
        for (int m = 1; m <= up; ++m)
            for (int i = 0; i + m <= up; ++i)
                T[i] = (x[i + m] * T[i] - x[i] * T[i + 1]) / (x[i + m] - x[i]);
        return T[0];
    };
    // Lagrange basis at 0 for error propagation
    std::vector<double> wabs(J + 1);
    for (int j = 0; j <= J; ++j) {
        double w = 1;
        for (int k = 0; k <= J; ++k)
            if (k != j) w *= x[k] / (x[k] - x[j]);
        wabs[j] = std::abs(w);
    }

    PoleFit fit;
    fit.location = a;
    fit.rel_gap_by_order.assign(q_max, 0.0);
    for (int q = 1; q <= q_max; ++q) {
        std::vector<double> g(J + 1), gm1(J + 1);
        for (int j = 0; j <= J; ++j) {
            g[j] = std::pow(x[j], q) * v[j];
            gm1[j] = std::pow(x[j], q - 1) * v[j];
        }
        double lim = neville0(g, J);
        double prev = neville0(g, J - 1);
        double gap = std::abs(lim - prev);
        fit.rel_gap_by_order[q - 1] =
            gap / std::max(std::abs(lim), 1e-300);
        bool stable = std::abs(lim) > 1e-12 &&
                      gap <= 0.005 * std::abs(lim);
        bool lower_diverges =
            std::abs(gm1[J]) > 10.0 * std::abs(gm1[0]);
        if (stable && lower_diverges) {
            double prop = 0;
            for (int j = 0; j <= J; ++j)
                prop += wabs[j] * std::pow(x[j], q) * verr[j];
            fit.order = q;
            fit.leading = lim;
            fit.error = gap + prop;
            fit.stable = true;
            return fit;
        }
    }
    std::string gaps;
    for (double gq : fit.rel_gap_by_order)
        gaps += " " + std::to_string(gq);
    throw ConvergenceError("pole_fit: no stable order <= " +
                           std::to_string(q_max) + " for " + E.name +
                           " (relative gaps:" + gaps + ")");
}

MellinCheck mellin_identity_check(int r, const std::vector<double>& w,
                                  const std::vector<double>& rho, double s) {
    if (r != 1 && r != 2) throw DomainError("mellin check: r must be 1 or 2");
    if (static_cast<int>(w.size()) != r + 1 ||
        static_cast<int>(rho.size()) != r)
        throw DomainError("mellin check: need r+1 weights and r contours");
    double rho_sum = 0;
    for (double x : rho) {
        if (x <= 0) throw DomainError("mellin check: contours must be > 0");
        rho_sum += x;
    }
    for (double x : w)
        if (x <= 0) throw DomainError("mellin check: weights must be > 0");
    if (s <= rho_sum)
        throw DomainError("mellin check: need s > sum of contour abscissas");

    using C = std::complex<double>;
    double T = 40 + 10 * std::abs(s);
    double wsum = 0;
    for (double x : w) wsum += x;

    MellinCheck out;
    out.lhs = std::exp(std::lgamma(s) - s * std::log(wsum));

    const double lw0 = std::log(w[0]);
    if (r == 1) {
        const double lw1 = std::log(w[1]);
        auto f = [&](double t) -> C {
            C z(rho[0], t);
            return cgamma(s - z) * cgamma(z) *
                   std::exp(-(s - z) * lw0 - z * lw1);
        };
        auto res = integrate_adaptive<C>(f, -T, T, 1e-11, 0.0, 4000);
        out.rhs = res.value / (2 * M_PI);
        out.truncation =
            (std::abs(f(T)) + std::abs(f(-T))) / (M_PI / 2) / (2 * M_PI) +
            res.error / (2 * M_PI);
    } else {
        const double lw1 = std::log(w[1]), lw2 = std::log(w[2]);
        auto inner = [&](C z1) {
            auto f2 = [&](double t2) -> C {
                C z2(rho[1], t2);
                return cgamma(s - z1 - z2) * cgamma(z1) * cgamma(z2) *
                       std::exp(-(s - z1 - z2) * lw0 - z1 * lw1 - z2 * lw2);
            };
            return integrate_adaptive<C>(f2, -T, T, 1e-9, 0.0, 3000).value;
        };
        auto f1 = [&](double t1) -> C { return inner(C(rho[0], t1)); };
        auto res = integrate_adaptive<C>(f1, -T, T, 1e-9, 0.0, 3000);
        double tp = 4 * M_PI * M_PI;
        out.rhs = res.value / tp;
        out.truncation = (std::abs(f1(T)) + std::abs(f1(-T))) / (M_PI / 2) / tp +
                         res.error / tp;
    }
    out.residual = std::abs(C(out.lhs, 0) - out.rhs);
    return out;
}

}  // namespace mzl

#include "mzl/constants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include "mzl/dirichlet.hpp"
#include "mzl/error.hpp"
#include "mzl/exact_linalg.hpp"
#include "mzl/newton.hpp"
#include "mzl/quadrature.hpp"

namespace mzl {

namespace {

// ---------------- exact hull volumes, dimension <= 3 ----------------

RatVec vsub(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Rat cross2(const RatVec& o, const RatVec& a, const RatVec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

RatVec cross3(const RatVec& a, const RatVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

Rat det3(const RatVec& a, const RatVec& b, const RatVec& c) {
    return dot(a, cross3(b, c));
}

std::vector<RatVec> dedup(std::vector<RatVec> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// counterclockwise boundary cycle (monotone chain)
std::vector<RatVec> hull2(std::vector<RatVec> pts) {
    pts = dedup(std::move(pts));
    if (pts.size() <= 2) return pts;
    std::vector<RatVec> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

Rat polygon_area(const std::vector<RatVec>& cycle) {
    if (cycle.size() < 3) return 0;
    Rat a = 0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const auto& p = cycle[i];
        const auto& q = cycle[(i + 1) % cycle.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    a /= 2;
    return a < 0 ? Rat(-a) : a;
}

Rat hull_volume3(std::vector<RatVec> pts) {
    pts = dedup(std::move(pts));
    std::size_t N = pts.size();
    if (N < 4) return 0;
    RatVec c(3, Rat(0));
    for (const auto& p : pts)
        for (int i = 0; i < 3; ++i) c[i] += p[i];
    for (int i = 0; i < 3; ++i) c[i] /= static_cast<long>(N);

    Rat vol = 0;
    std::vector<std::pair<RatVec, Rat>> seen;  // outward (normal, offset)
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k) {
                RatVec nrm = cross3(vsub(pts[j], pts[i]), vsub(pts[k], pts[i]));
                if (nrm[0] == 0 && nrm[1] == 0 && nrm[2] == 0) continue;
                Rat off = dot(nrm, pts[i]);
                Rat side = dot(nrm, c) - off;
                if (side == 0) continue;  // can't support a full-dim hull
                if (side > 0) {
                    for (auto& t : nrm) t = -t;
                    off = -off;
                }
                bool facet = true;
                for (const auto& p : pts)
                    if (dot(nrm, p) > off) {
                        facet = false;
                        break;
                    }
                if (!facet) continue;
                // canonical representative for deduplication
                Rat sc = 0;
                for (const auto& t : nrm)
                    if (t != 0) {
                        sc = t < 0 ? Rat(-t) : t;
                        break;
                    }
                RatVec key = nrm;
                for (auto& t : key) t /= sc;
                Rat koff = off / sc;
                bool dup = false;
                for (const auto& [kn, ko] : seen)
                    if (kn == key && ko == koff) {
                        dup = true;
                        break;
                    }
                if (dup) continue;
                seen.emplace_back(key, koff);

                // order the facet boundary via a 2-D hull of a projection
                int drop = 0;
                Rat best = nrm[0] < 0 ? Rat(-nrm[0]) : nrm[0];
                for (int t = 1; t < 3; ++t) {
                    Rat a = nrm[t] < 0 ? Rat(-nrm[t]) : nrm[t];
                    if (a > best) {
                        best = a;
                        drop = t;
                    }
                }
                std::vector<RatVec> proj;
                std::map<RatVec, RatVec> back;
                for (const auto& p : pts)
                    if (dot(nrm, p) == off) {
                        RatVec pr = {p[(drop + 1) % 3], p[(drop + 2) % 3]};
                        back[pr] = p;
                        proj.push_back(pr);
                    }
                auto cyc = hull2(proj);
                if (cyc.size() < 3) continue;
                const RatVec& v0 = back[cyc[0]];
                for (std::size_t t = 1; t + 1 < cyc.size(); ++t) {
                    Rat d = det3(vsub(v0, c), vsub(back[cyc[t]], c),
                                 vsub(back[cyc[t + 1]], c));
                    vol += (d < 0 ? Rat(-d) : d) / 6;
                }
            }
    return vol;
}

Rat hull_volume(const std::vector<RatVec>& pts, int n) {
    if (pts.empty()) return 0;
    if (n == 1) {
        Rat lo = pts[0][0], hi = pts[0][0];
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        return hi - lo;
    }
    if (n == 2) return polygon_area(hull2(pts));
    if (n == 3) return hull_volume3(pts);
    throw BudgetError("exact hull volume limited to dimension 3");
}

// ---------------- Richardson ladder at a known pole order ----------------

struct Ladder {
    double value = 0;
    double error = 0;
};

Ladder richardson_limit(const std::function<ValueWithError(double)>& g,
                        double sigma0, int rho0, double h, int J) {
    std::vector<double> x(J + 1), v(J + 1), verr(J + 1);
    for (int j = 0; j <= J; ++j) {
        x[j] = h * std::ldexp(1.0, -j);
        auto y = g(sigma0 + x[j]);
        double w = std::pow(x[j], rho0);
        v[j] = w * y.value;
        verr[j] = w * y.error;
    }
    auto neville0 = [&](int up) {
        std::vector<double> T(v.begin(), v.begin() + up + 1);
        for (int m = 1; m <= up; ++m)
            for (int i = 0; i + m <= up; ++i)
                T[i] = (x[i + m] * T[i] - x[i] * T[i + 1]) / (x[i + m] - x[i]);
        return T[0];
    };
    double lim = neville0(J), prev = neville0(J - 1);
    double prop = 0;
    for (int j = 0; j <= J; ++j) {
        double w = 1;
        for (int k = 0; k <= J; ++k)
            if (k != j) w *= x[k] / (x[k] - x[j]);
        prop += std::abs(w) * verr[j];
    }
    return {lim, std::abs(lim - prev) + prop};
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

MixedData mixed_exponents(const PolarType& T, const GenPoly& P) {
    if (T.n != P.n) throw DomainError("mixed exponents: dimension mismatch");
    if (T.I.empty() || T.I.size() != T.u.size())
        throw DomainError("mixed exponents: malformed polar type");
    for (std::size_t i = 0; i < T.I.size(); ++i) {
        if (static_cast<int>(T.I[i].size()) != T.n)
            throw DomainError("mixed exponents: dimension mismatch");
        if (T.u[i] < 1) throw DomainError("mixed exponents: multiplicity < 1");
        bool zero = true;
        for (const auto& q : T.I[i]) {
            if (q < 0) throw DomainError("mixed exponents: negative entry");
            if (q != 0) zero = false;
        }
        if (zero) throw DomainError("mixed exponents: zero vector in I");
    }

    MixedData md;
    md.n = P.n;
    md.r = static_cast<int>(P.terms.size());
    std::vector<RatVec> gammas;
    for (const auto& [e, c] : P.terms) {
        gammas.push_back(e);
        md.b.push_back(c);
    }
    md.alphas.assign(md.n, RatVec(md.r, Rat(0)));
    for (int k = 0; k < md.r; ++k)
        for (int i = 0; i < md.n; ++i) md.alphas[i][k] = gammas[k][i];

    std::map<RatVec, int> acc;
    int usum = 0;
    for (std::size_t t = 0; t < T.I.size(); ++t) {
        RatVec mu(md.r, Rat(0));
        for (int k = 0; k < md.r; ++k) mu[k] = dot(T.I[t], gammas[k]);
        acc[mu] += T.u[t];
        usum += T.u[t];
    }
    int usum_tp = 0;
    for (auto& [eta, m] : acc) {
        md.I_TP.push_back(eta);
        md.u_TP.push_back(m);
        usum_tp += m;
    }
    md.rho0_T = usum - rank_of(T.I) + 1;
    md.rho0_TP = usum_tp - rank_of(md.I_TP) + 1;
    return md;
}

GenPoly build_generalized_polynomial(const std::vector<RatVec>& I,
                                     const std::vector<int>& u,
                                     const std::vector<double>& b) {
    if (I.empty() || I.size() != u.size())
        throw DomainError("generalized polynomial: malformed input");
    std::size_t r = I[0].size();
    if (b.size() != r)
        throw DomainError(
            "generalized polynomial: coefficient count must match the vector "
            "dimension");
    for (double c : b)
        if (!(c > 0)) throw DomainError("generalized polynomial: b > 0");
    long q = 0;
    for (std::size_t t = 0; t < I.size(); ++t) {
        if (I[t].size() != r)
            throw DomainError("generalized polynomial: ragged I");
        if (u[t] < 1)
            throw DomainError("generalized polynomial: multiplicity < 1");
        q += u[t];
    }
    if (q > 8) throw BudgetError("generalized polynomial: q <= 8");

    std::vector<const RatVec*> rows;
    for (std::size_t t = 0; t < I.size(); ++t)
        for (int c = 0; c < u[t]; ++c) rows.push_back(&I[t]);

    GenPoly P;
    P.n = static_cast<int>(q);
    for (std::size_t k = 0; k < r; ++k) {
        RatVec gk(q);
        for (long i = 0; i < q; ++i) gk[i] = (*rows[i])[k];
        P.terms[gk] += b[k];
    }
    return P;
}

ConstantEstimate volume_constant(const std::vector<RatVec>& I,
                                 const std::vector<int>& u,
                                 const std::vector<double>& b,
                                 double rel_tol) {
    GenPoly Pg = build_generalized_polynomial(I, u, b);
    if (Pg.n > 3)
        throw BudgetError(
            "volume constant ladder: at most 3 accumulation variables");
    auto df = diagonal_face(polyhedron_at_infinity(support(Pg)));
    GenPoly shifted = Pg;
    shifted.terms[RatVec(Pg.n, Rat(0))] += 1.0;

    double ytol = Pg.n >= 3 ? std::max(rel_tol, 2e-5) : rel_tol;
    int J = Pg.n >= 3 ? 4 : 6;
    double s0 = to_double(df.sigma0);
    auto lad = richardson_limit(
        [&](double s) { return eval_Y(shifted, s, ytol); }, s0, df.rho0, 0.25,
        J);
    return {lad.value, lad.error, s0, df.rho0};
}

ConstantEstimate mixed_volume_constant(const PolarType& T, const GenPoly& P,
                                       double rel_tol) {
    MixedData md = mixed_exponents(T, P);
    return volume_constant(md.I_TP, md.u_TP, md.b, rel_tol);
}

ConstantEstimate elliptic_volume_constant(const GenPoly& P, double rel_tol) {
    if (!is_elliptic(P))
        throw DomainError("elliptic constant: polynomial is not elliptic");
    int n = P.n;
    double d = to_double(poly_degree(P));
    GenPoly Pd = homogeneous_part(P);
    CompiledPoly cp = compile_poly(Pd);
    double ex = -static_cast<double>(n) / d;

    ConstantEstimate out;
    out.sigma0 = static_cast<double>(n) / d;
    out.rho0 = 1;
    if (n == 1) {
        std::vector<double> one{1.0};
        out.value = std::pow(cp.eval(one.data()), ex) / d;
        out.error = out.value * 1e-15;
        return out;
    }
    if (n > 4) throw BudgetError("elliptic constant: n <= 4");

    double lvl = rel_tol / n;
    int panels = n <= 2 ? 3000 : (n == 3 ? 800 : 200);
    std::vector<double> w(n, 0.0);
    std::function<double(int, double)> level = [&](int i, double rem) {
        if (i == n - 1) {
            w[i] = rem;
            return std::pow(cp.eval(w.data()), ex);
        }
        auto f = [&](double t) {
            w[i] = t;
            return level(i + 1, rem - t);
        };
        return integrate_adaptive<double>(f, 0.0, rem, lvl, 0.0, panels).value;
    };
    auto f0 = [&](double t) {
        w[0] = t;
        return level(1, 1.0 - t);
    };
    auto res = integrate_adaptive<double>(f0, 0.0, 1.0, lvl, 0.0, panels);
    out.value = res.value / d;
    out.error = (res.error + std::abs(res.value) * lvl * (n - 2)) / d;
    return out;
}

MonteCarloEstimate sublevel_volume(const GenPoly& Pd, std::uint64_t samples,
                                   std::uint64_t seed, int threads) {
    if (!is_homogeneous(Pd) || !is_elliptic(Pd))
        throw DomainError("sublevel volume: need a homogeneous elliptic form");
    if (samples == 0) throw DomainError("sublevel volume: samples == 0");
    int n = Pd.n;
    Rat dq = poly_degree(Pd);
    double d = to_double(dq);

    // axis bounds from the pure-power terms c_i x_i^d
    std::vector<double> box(n);
    double boxvol = 1;
    for (int i = 0; i < n; ++i) {
        RatVec e(n, Rat(0));
        e[i] = dq;
        auto it = Pd.terms.find(e);
        if (it == Pd.terms.end())
            throw DomainError("sublevel volume: missing pure power");
        box[i] = std::pow(it->second, -1.0 / d);
        boxvol *= box[i];
    }

    CompiledPoly cp = compile_poly(Pd);
    const std::uint64_t chunk = 1u << 16;
    const std::uint64_t nchunks = (samples + chunk - 1) / chunk;
    std::vector<std::uint64_t> hits(nchunks, 0);

    auto run_chunk = [&](std::uint64_t ci) {
        std::uint64_t lo = ci * chunk;
        std::uint64_t hi = std::min(samples, lo + chunk);
        std::mt19937_64 rng(splitmix64(seed ^ (ci + 1)));
        std::vector<double> x(n);
        std::uint64_t h = 0;
        for (std::uint64_t s = lo; s < hi; ++s) {
            for (int i = 0; i < n; ++i)
                x[i] = box[i] * ((rng() >> 11) * 0x1.0p-53);
            if (cp.eval(x.data()) <= 1.0) ++h;
        }
        hits[ci] = h;
    };

    int tn = std::clamp(threads, 1, 64);
    if (tn == 1 || nchunks == 1) {
        for (std::uint64_t ci = 0; ci < nchunks; ++ci) run_chunk(ci);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::uint64_t> next{0};
        for (int t = 0; t < tn; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    std::uint64_t ci = next.fetch_add(1);
                    if (ci >= nchunks) return;
                    run_chunk(ci);
                }
            });
        for (auto& th : pool) th.join();
    }

    std::uint64_t total = 0;
    for (std::uint64_t ci = 0; ci < nchunks; ++ci) total += hits[ci];
    double p = static_cast<double>(total) / static_cast<double>(samples);
    MonteCarloEstimate mc;
    mc.samples = samples;
    mc.value = boxvol * p;
    mc.std_error =
        boxvol * std::sqrt(std::max(p * (1 - p), 1.0 / samples) /
                           static_cast<double>(samples));
    return mc;
}

ConstantEstimate volume_constant_direct(const GenPoly& P, double rel_tol) {
    int n = P.n;
    if (n > 3) throw BudgetError("direct volume constant limited to n <= 3");
    auto E = polyhedron_at_infinity(support(P));
    auto df = diagonal_face(E);
    double sigma0 = to_double(df.sigma0);
    int rho0 = df.rho0;

    std::vector<RatVec> lambdas;
    for (int idx : df.active_facets) {
        const Facet& f = E.facets[idx];
        if (!(f.offset > 0))
            throw DomainError("direct constant: facet through the origin");
        RatVec lam(n);
        for (int i = 0; i < n; ++i) lam[i] = f.normal[i] / f.offset;
        lambdas.push_back(lam);
    }

    std::vector<int> rec = df.face.recession_axes;
    std::sort(rec.begin(), rec.end());
    int m = n - static_cast<int>(rec.size());

    // direction space of G0
    RatMat dirs;
    for (std::size_t k = 1; k < df.face.active.size(); ++k)
        dirs.push_back(vsub(df.face.active[k], df.face.active[0]));
    for (int j : rec) {
        RatVec e(n, Rat(0));
        e[j] = 1;
        dirs.push_back(e);
    }
    if (rank_of(dirs) != n - rho0)
        throw DomainError("direct constant: face dimension mismatch");

    // face polynomial with original coefficients
    CompiledPoly cp = [&] {
        GenPoly G;
        G.n = n;
        for (const auto& pt : df.face.active) G.terms[pt] = P.terms.at(pt);
        return compile_poly(G);
    }();

    double fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<double, double>> results;  // (value, error)
    do {
        bool ok = true;
        for (int pos = 0; pos < n && ok; ++pos) {
            bool isrec = std::binary_search(rec.begin(), rec.end(), perm[pos]);
            if (isrec != (pos >= m)) ok = false;
        }
        if (!ok) continue;
        RatMat M = dirs;
        for (int pos = 0; pos < rho0; ++pos) {
            RatVec e(n, Rat(0));
            e[perm[pos]] = 1;
            M.push_back(e);
        }
        if (rank_of(M) != n) continue;

        // iterated integral in the permuted coordinates: first rho0 pinned
        // at 1, middle block over [0,inf), trailing block over [1,inf)
        int idim = n - rho0;
        std::vector<double> xv(n, 1.0);
        double lvl = std::max(rel_tol, 1e-11) / std::max(idim, 1);
        int panels = idim <= 1 ? 3000 : 700;
        double value, qerr;
        if (idim == 0) {
            value = std::pow(cp.eval(xv.data()), -sigma0);
            qerr = value * 1e-15;
        } else {
            // half-lines mapped to [0,1): x = base + t/(1-t)
            std::function<QuadResult<double>(int)> level =
                [&](int b) -> QuadResult<double> {
                int pos = rho0 + b;
                double base = pos >= m ? 1.0 : 0.0;
                auto f = [&](double t) {
                    double u = 1.0 - t;
                    xv[perm[pos]] = base + t / u;
                    double jac = 1.0 / (u * u);
                    double v = b + 1 == idim
                                   ? std::pow(cp.eval(xv.data()), -sigma0)
                                   : level(b + 1).value;
                    return v * jac;
                };
                return integrate_adaptive<double>(f, 0.0, 1.0, lvl, 0.0,
                                                  panels);
            };
            auto res = level(0);
            value = res.value;
            qerr = res.error + std::abs(res.value) * lvl * (idim - 1);
        }

        // Lambda in the permuted coordinates
        std::vector<RatVec> pts;
        pts.push_back(RatVec(n, Rat(0)));
        for (const auto& lam : lambdas) {
            RatVec pl(n);
            for (int pos = 0; pos < n; ++pos) pl[pos] = lam[perm[pos]];
            pts.push_back(pl);
        }
        for (int pos = rho0; pos < n; ++pos) {
            RatVec e(n, Rat(0));
            e[pos] = 1;
            pts.push_back(e);
        }
        double vol = to_double(hull_volume(pts, n));
        results.emplace_back(fact * vol * value, fact * vol * qerr);
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (results.empty())
        throw DomainError(
            "direct constant: no coordinate permutation realizes the "
            "splitting");
    for (std::size_t i = 1; i < results.size(); ++i) {
        double tol = 0.005 * std::abs(results[0].first) +
                     5 * (results[0].second + results[i].second) + 1e-12;
        if (std::abs(results[i].first - results[0].first) > tol)
            throw DomainError("direct constant: permutation values disagree");
    }
    return {results[0].first, results[0].second, sigma0, rho0};
}

}  // namespace mzl

#include "mzl/newton.hpp"

#include <algorithm>
#include <set>

#include "mzl/error.hpp"
#include "mzl/exact_linalg.hpp"

namespace mzl {

namespace {

constexpr int kMaxDim = 8;

// Scale to coprime integer entries, keeping direction.
RatVec primitive(RatVec v) {
    mpz_class lcm = 1;
    for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_class gcd = 0;
    for (auto& x : v) {
        x *= Rat(lcm);
        mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), x.get_num().get_mpz_t());
    }
    if (gcd != 0)
        for (auto& x : v) x /= Rat(gcd);
    return v;
}

std::vector<RatVec> dedupe(std::vector<RatVec> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

void check_points(const std::vector<RatVec>& pts, bool allow_origin) {
    if (pts.empty()) throw DomainError("empty generator set");
    std::size_t n = pts[0].size();
    if (n < 1 || n > kMaxDim)
        throw DomainError("dimension out of budget (1..8)");
    for (const auto& p : pts) {
        if (p.size() != n) throw DomainError("inconsistent generator dimensions");
        bool zero = true;
        for (const auto& x : p) {
            if (x < 0) throw DomainError("generators must be componentwise >= 0");
            if (x != 0) zero = false;
        }
        if (zero && !allow_origin) throw DomainError("zero generator not allowed");
    }
}

// Irredundant facets via the polar of the homogenized cone. Orthant
// recession forces a >= 0 in both orientations, contributed by rows (e_i,0).
// up = true:  conv(pts) + R+^n, rows +(g,1), ray (a,t) means <a,x> >= -t.
// up = false: conv(pts) - R+^n, rows -(g,1), ray (a,t) means <a,x> <= -t.
std::vector<Facet> hull_facets(const std::vector<RatVec>& pts, bool up) {
    int n = static_cast<int>(pts[0].size());
    std::vector<RatVec> rows;
    for (const auto& g : pts) {
        RatVec h(n + 1);
        for (int i = 0; i < n; ++i) h[i] = up ? g[i] : -g[i];
        h[n] = up ? 1 : -1;
        rows.push_back(std::move(h));
    }
    for (int i = 0; i < n; ++i) {
        RatVec h(n + 1, Rat(0));
        h[i] = 1;
        rows.push_back(std::move(h));
    }
    ConeRays polar = dual_cone_rays(rows, n + 1);
    if (!polar.lineality.empty())
        throw Error("polar cone has lineality (degenerate generator set)");
    std::vector<Facet> out;
    for (const auto& A : polar.rays) {
        RatVec a(A.begin(), A.end() - 1);
        bool zero = std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
        if (zero) continue;  // homogenization artifact, not a geometric facet
        out.push_back(Facet{std::move(a), -A.back()});
    }
    std::sort(out.begin(), out.end(), [](const Facet& f, const Facet& g) {
        return f.normal < g.normal || (f.normal == g.normal && f.offset < g.offset);
    });
    return out;
}

int face_dim_from_points(const std::vector<RatVec>& pts,
                         const std::vector<int>& recession_axes, int n) {
    RatMat span;
    if (!pts.empty())
        for (std::size_t i = 1; i < pts.size(); ++i) {
            RatVec d(n);
            for (int j = 0; j < n; ++j) d[j] = pts[i][j] - pts[0][j];
            span.push_back(std::move(d));
        }
    for (int axis : recession_axes) {
        RatVec e(n, Rat(0));
        e[axis] = 1;
        span.push_back(std::move(e));
    }
    return rank_of(span);
}

}  // namespace

ConeRays dual_cone_rays(const std::vector<RatVec>& halfspaces, int dim) {
    ConeRays st;
    for (int i = 0; i < dim; ++i) {
        RatVec e(dim, Rat(0));
        e[i] = 1;
        st.lineality.push_back(std::move(e));
    }
    std::vector<RatVec> processed;
    auto active_rank = [&](const RatVec& r1, const RatVec& r2) {
        RatMat rows;
        for (const auto& h : processed)
            if (dot(h, r1) == 0 && dot(h, r2) == 0) rows.push_back(h);
        return rank_of(rows);
    };
    for (const auto& h : halfspaces) {
        if (static_cast<int>(h.size()) != dim)
            throw DomainError("halfspace dimension mismatch");
        std::size_t li = st.lineality.size();
        for (std::size_t i = 0; i < st.lineality.size(); ++i)
            if (dot(h, st.lineality[i]) != 0) {
                li = i;
                break;
            }
        if (li < st.lineality.size()) {
            RatVec l0 = st.lineality[li];
            st.lineality.erase(st.lineality.begin() + li);
            Rat hl0 = dot(h, l0);
            if (hl0 < 0) {
                for (auto& x : l0) x = -x;
                hl0 = -hl0;
            }
            for (auto& l : st.lineality) {
                Rat f = dot(h, l) / hl0;
                if (f != 0)
                    for (int j = 0; j < dim; ++j) l[j] -= f * l0[j];
            }
            for (auto& r : st.rays) {
                Rat f = dot(h, r) / hl0;
                if (f != 0)
                    for (int j = 0; j < dim; ++j) r[j] -= f * l0[j];
                r = primitive(std::move(r));
            }
            st.rays.push_back(primitive(std::move(l0)));
        } else {
            std::vector<RatVec> pos, zero, neg;
            for (auto& r : st.rays) {
                Rat v = dot(h, r);
                if (v > 0)
                    pos.push_back(std::move(r));
                else if (v == 0)
                    zero.push_back(std::move(r));
                else
                    neg.push_back(std::move(r));
            }
            int want = dim - static_cast<int>(st.lineality.size()) - 2;
            std::vector<RatVec> next = pos;
            for (auto& z : zero) next.push_back(std::move(z));
            for (const auto& p : pos)
                for (const auto& m : neg) {
                    if (want >= 0 && active_rank(p, m) != want) continue;
                    Rat hp = dot(h, p), hm = dot(h, m);
                    RatVec w(dim);
                    for (int j = 0; j < dim; ++j) w[j] = hp * m[j] - hm * p[j];
                    next.push_back(primitive(std::move(w)));
                }
            st.rays = dedupe(std::move(next));
        }
        processed.push_back(h);
    }
    for (const auto& r : st.rays)
        for (const auto& h : processed)
            if (dot(h, r) < 0) throw Error("double description produced an invalid ray");
    return st;
}

PolyhedronAtInfinity polyhedron_at_infinity(const std::vector<RatVec>& points) {
    auto pts = dedupe(points);
    check_points(pts, /*allow_origin=*/true);
    // The origin is absorbed: 0 lies below every g >= 0.
    std::erase_if(pts, [](const RatVec& p) {
        return std::all_of(p.begin(), p.end(), [](const Rat& x) { return x == 0; });
    });
    if (pts.empty()) throw DomainError("support contains only the origin");
    int n = static_cast<int>(pts[0].size());

    PolyhedronAtInfinity E;
    E.n = n;
    E.generators = pts;
    E.facets = hull_facets(pts, /*up=*/false);
    for (const auto& f : E.facets)
        for (const auto& x : f.normal)
            if (x < 0) throw Error("at-infinity facet normal has a negative entry");
    for (const auto& g : pts) {
        RatMat active;
        for (const auto& f : E.facets)
            if (dot(f.normal, g) == f.offset) active.push_back(f.normal);
        if (rank_of(active) == n) E.vertices.push_back(g);
    }
    return E;
}

NewtonPolyhedron newton_polyhedron(const std::vector<RatVec>& points) {
    auto pts = dedupe(points);
    check_points(pts, /*allow_origin=*/false);
    int n = static_cast<int>(pts[0].size());
    NewtonPolyhedron E;
    E.n = n;
    E.generators = pts;
    E.facets = hull_facets(pts, /*up=*/true);
    for (const auto& f : E.facets)
        for (const auto& x : f.normal)
            if (x < 0) throw Error("newton facet normal has a negative entry");
    return E;
}

DiagonalFace diagonal_face(const PolyhedronAtInfinity& E) {
    // Largest lambda with lambda.(1..1) in E: min over facets of m/|a|.
    bool first = true;
    Rat lam = 0;
    for (const auto& f : E.facets) {
        Rat s = sum(f.normal);
        if (s <= 0) throw Error("facet with nonpositive normal sum");
        if (f.offset <= 0)
            throw DomainError("diagonal does not meet the polyhedron at positive scale");
        Rat cand = f.offset / s;
        if (first || cand < lam) {
            lam = cand;
            first = false;
        }
    }
    if (first) throw DomainError("polyhedron has no facets");
    DiagonalFace out;
    out.sigma0 = 1 / lam;
    RatVec witness(E.n, Rat(0));
    RatMat normals;
    for (std::size_t j = 0; j < E.facets.size(); ++j) {
        const auto& f = E.facets[j];
        if (lam * sum(f.normal) == f.offset) {
            out.active_facets.push_back(static_cast<int>(j));
            normals.push_back(f.normal);
            for (int i = 0; i < E.n; ++i) witness[i] += f.normal[i];
        }
    }
    out.rho0 = rank_of(normals);
    Face face;
    face.witness = primitive(witness);
    Rat wsum = sum(face.witness);
    face.value = lam * wsum;
    for (const auto& g : E.generators) {
        bool on_all = true;
        for (int j : out.active_facets)
            if (dot(E.facets[j].normal, g) != E.facets[j].offset) {
                on_all = false;
                break;
            }
        if (on_all) face.active.push_back(g);
    }
    for (int i = 0; i < E.n; ++i) {
        bool free_axis = true;
        for (int j : out.active_facets)
            if (E.facets[j].normal[i] != 0) {
                free_axis = false;
                break;
            }
        if (free_axis) face.recession_axes.push_back(i);
    }
    face.codim = out.rho0;
    face.dim = E.n - out.rho0;
    out.face = std::move(face);
    return out;
}

DiagonalEntry diagonal_entry(const NewtonPolyhedron& E) {
    bool first = true;
    Rat lam = 0;
    for (const auto& f : E.facets) {
        if (f.offset <= 0) continue;  // through the origin, never met by the diagonal
        Rat cand = f.offset / sum(f.normal);
        if (first || cand > lam) {
            lam = cand;
            first = false;
        }
    }
    if (first) throw DomainError("diagonal never enters the polyhedron");
    DiagonalEntry out;
    out.lambda = lam;
    RatVec w(E.n, Rat(0));
    for (std::size_t j = 0; j < E.facets.size(); ++j) {
        const auto& f = E.facets[j];
        if (f.offset > 0 && lam * sum(f.normal) == f.offset) {
            out.active_facets.push_back(static_cast<int>(j));
            for (int i = 0; i < E.n; ++i) w[i] += f.normal[i];
        }
    }
    for (const auto& g : E.generators) {
        bool on_all = true;
        for (int j : out.active_facets)
            if (dot(E.facets[j].normal, g) != E.facets[j].offset) {
                on_all = false;
                break;
            }
        if (on_all) out.face_points.push_back(g);
    }
    out.compact = true;
    for (int i = 0; i < E.n && out.compact; ++i) {
        bool pinned = false;
        for (int j : out.active_facets)
            if (E.facets[j].normal[i] != 0) pinned = true;
        if (!pinned) out.compact = false;
    }
    // <c,x> = 1 on the face; support value of w at the entry point is lam*|w|.
    Rat denom = lam * sum(w);
    out.c.resize(E.n);
    for (int i = 0; i < E.n; ++i) out.c[i] = w[i] / denom;
    return out;
}

HalfspacePolyhedron halfspace_polyhedron(const std::vector<RatVec>& I) {
    HalfspacePolyhedron S;
    if (I.empty()) throw DomainError("empty direction set");
    S.n = static_cast<int>(I[0].size());
    if (S.n < 1 || S.n > kMaxDim) throw DomainError("dimension out of budget (1..8)");
    if (I.size() > 20) throw BudgetError("more than 20 directions");
    for (const auto& b : I) {
        if (static_cast<int>(b.size()) != S.n)
            throw DomainError("inconsistent direction dimensions");
        bool zero = true;
        for (const auto& x : b) {
            if (x < 0) throw DomainError("directions must be componentwise >= 0");
            if (x != 0) zero = false;
        }
        if (zero) throw DomainError("zero direction not allowed");
    }
    S.I = I;

    // Vertices: feasible intersections of n active constraints drawn from
    // {<beta,x> = 1} and {x_i = 0}.
    int n = S.n;
    int total = static_cast<int>(I.size()) + n;
    std::vector<int> idx(n);
    std::set<RatVec> found;
    auto constraint_row = [&](int k, RatVec& row, Rat& rhs) {
        if (k < static_cast<int>(I.size())) {
            row = I[k];
            rhs = 1;
        } else {
            row.assign(n, Rat(0));
            row[k - I.size()] = 1;
            rhs = 0;
        }
    };
    std::vector<int> comb(n);
    for (int i = 0; i < n; ++i) comb[i] = i;
    while (true) {
        RatMat A(n, RatVec(n));
        RatVec b(n);
        for (int i = 0; i < n; ++i) {
            Rat rhs;
            constraint_row(comb[i], A[i], rhs);
            b[i] = rhs;
        }
        if (auto x = solve_square(A, b)) {
            bool ok = true;
            for (const auto& xi : *x)
                if (xi < 0) {
                    ok = false;
                    break;
                }
            if (ok)
                for (const auto& beta : I)
                    if (dot(beta, *x) < 1) {
                        ok = false;
                        break;
                    }
            if (ok) found.insert(*x);
        }
        int i = n - 1;
        while (i >= 0 && comb[i] == total - n + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
    }
    S.vertices.assign(found.begin(), found.end());
    return S;
}

Face first_meet_locus(const HalfspacePolyhedron& S, const RatVec& a) {
    if (static_cast<int>(a.size()) != S.n) throw DomainError("direction dimension mismatch");
    bool zero = true;
    for (const auto& x : a) {
        if (x < 0) throw DomainError("direction must be componentwise >= 0");
        if (x != 0) zero = false;
    }
    if (zero) throw DomainError("zero direction");
    if (S.vertices.empty()) throw DomainError("polyhedron has no vertices");
    Face f;
    f.witness = primitive(a);
    Rat best;
    bool first = true;
    for (const auto& v : S.vertices) {
        Rat val = dot(f.witness, v);
        if (first || val < best) {
            best = val;
            first = false;
        }
    }
    f.value = best;
    for (const auto& v : S.vertices)
        if (dot(f.witness, v) == best) f.active.push_back(v);
    for (int i = 0; i < S.n; ++i)
        if (f.witness[i] == 0) f.recession_axes.push_back(i);
    f.dim = face_dim_from_points(f.active, f.recession_axes, S.n);
    f.codim = S.n - f.dim;
    return f;
}

IndexData index_of(const HalfspacePolyhedron& S) {
    RatVec ones(S.n, Rat(1));
    IndexData d{Rat(0), first_meet_locus(S, ones)};
    d.iota = d.face.value;
    return d;
}

ConeMembership cone_membership(const RatVec& v, const std::vector<RatVec>& generators,
                               bool open) {
    ConeMembership out;
    std::size_t n = v.size();
    for (const auto& g : generators)
        if (g.size() != n) throw DomainError("generator dimension mismatch");
    if (generators.empty()) {
        bool is_zero = std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
        out.inside = is_zero;
        return out;
    }
    std::size_t N = generators.size();
    if (!open) {
        RatMat A(n, RatVec(N));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < N; ++k) A[i][k] = generators[k][i];
        RatVec c(N, Rat(0));
        LPResult r = simplex_solve(A, v, c);
        if (r.status == LPResult::Status::Optimal) {
            out.inside = true;
            out.certificate = r.x;
        }
        return out;
    }
    // lambda = lambda' + t, maximize t with t <= 1; strict membership iff the
    // optimum is positive.
    RatMat A(n + 1, RatVec(N + 2, Rat(0)));
    RatVec b(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < N; ++k) {
            A[i][k] = generators[k][i];
            A[i][N] += generators[k][i];
        }
        b[i] = v[i];
    }
    A[n][N] = 1;
    A[n][N + 1] = 1;
    b[n] = 1;
    RatVec c(N + 2, Rat(0));
    c[N] = 1;
    LPResult r = simplex_solve(A, b, c);
    if (r.status == LPResult::Status::Optimal && r.objective > 0) {
        out.inside = true;
        out.certificate.resize(N);
        for (std::size_t k = 0; k < N; ++k) out.certificate[k] = r.x[k] + r.x[N];
    }
    return out;
}

}  // namespace mzl

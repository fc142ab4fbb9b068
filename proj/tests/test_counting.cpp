#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mzl/arith.hpp"
#include "mzl/constants.hpp"
#include "mzl/counting.hpp"
#include "mzl/error.hpp"
#include "mzl/polyring.hpp"

using namespace mzl;

namespace {

constexpr double kPi = 3.141592653589793238462643;

// reference count over the full coordinate box, no pruning
double brute_count(const ArithmeticFunction& f, const GenPoly& P, double t) {
    double bound = std::pow(t, to_double(poly_degree(P)));
    // per-axis limits from monotonicity in each coordinate
    std::vector<std::uint64_t> lim(P.n, 0);
    for (int i = 0; i < P.n; ++i) {
        std::vector<double> x(P.n, 1.0);
        std::uint64_t v = 1;
        for (;; ++v) {
            x[i] = static_cast<double>(v);
            if (evaluate(P, x) > bound) break;
        }
        lim[i] = v;  // first value past the region
    }
    std::vector<std::uint64_t> m(P.n, 1);
    std::vector<double> x(P.n);
    double total = 0;
    for (;;) {
        bool inside = true;
        for (int i = 0; i < P.n; ++i) x[i] = static_cast<double>(m[i]);
        if (evaluate(P, x) > bound) inside = false;
        if (inside) total += f.eval(m);
        int axis = P.n - 1;
        while (axis >= 0) {
            if (++m[axis] < lim[axis] + 1) break;
            m[axis] = 1;
            --axis;
        }
        if (axis < 0) break;
    }
    return total;
}

std::uint64_t hyperbola_count(std::uint64_t x) {
    // #{m1 m2 <= x} = 2 sum_{k <= sqrt(x)} floor(x/k) - floor(sqrt(x))^2
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt((double)x));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    std::uint64_t s = 0;
    for (std::uint64_t k = 1; k <= r; ++k) s += x / k;
    return 2 * s - r * r;
}

}  // namespace

TEST_CASE("count: closed-form small regions") {
    auto unit = builtin(FnKind::Unit, 0, 2);
    GenPoly lin = parse_poly("x1 + x2");

    CHECK(count(unit, lin, 10.0) == 45.0);
    CHECK(count(unit, lin, 2.0) == 1.0);
    CHECK(count(unit, lin, 0.5) == 0.0);
    CHECK(count(unit, lin, 100.0) == 4950.0);  // (t-1)t/2

    // fractional threshold lands strictly between lattice shells
    CHECK(count(unit, lin, 10.5) == 45.0);
}

TEST_CASE("count: hyperbola oracle for the product polynomial") {
    auto unit = builtin(FnKind::Unit, 0, 2);
    GenPoly prod = parse_poly("x1 x2");  // degree 2, bound = t^2
    for (double t : {10.0, 31.0, 100.0}) {
        auto x = static_cast<std::uint64_t>(t * t + 0.5);
        CHECK(count(unit, prod, t) ==
              static_cast<double>(hyperbola_count(x)));
    }
}

TEST_CASE("count: equals the naive box scan on small instances") {
    std::vector<GenPoly> polys = {
        parse_poly("x1^2 + 3 x1 x2 + x2^3"),
        parse_poly("2 x1 + x2"),
        parse_poly("x1^2 x2 + x2^2"),
    };
    std::vector<ArithmeticFunction> fns = {
        builtin(FnKind::Unit, 0, 2),
        builtin(FnKind::ComponentwiseKfree, 2, 2),
        builtin(FnKind::ProductKfree, 2, 2),
        builtin(FnKind::MangoldtProduct, 0, 2),
    };
    for (const auto& P : polys) {
        for (const auto& f : fns) {
            double got = count(f, P, 7.0);
            double want = brute_count(f, P, 7.0);
            if (f.integer_valued())
                CHECK(got == want);
            else
                CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }

    auto unit3 = builtin(FnKind::Unit, 0, 3);
    GenPoly P3 = parse_poly("x1 x2 x3 + x1^3");
    CHECK(count(unit3, P3, 6.0) == brute_count(unit3, P3, 6.0));
}

TEST_CASE("count: fractional exponents use the real-mode walker") {
    auto unit = builtin(FnKind::Unit, 0, 2);
    GenPoly frac = parse_poly("x1^3/2 + x2^3/2");
    // bound = 4^{3/2} = 8: (1,1),(1,2),(2,1),(1,3),(3,1),(2,2)
    CHECK(count(unit, frac, 4.0) == 6.0);
}

TEST_CASE("count: monotone in t and budget errors") {
    auto B2 = builtin(FnKind::ComponentwiseKfree, 2, 2);
    GenPoly circ = parse_poly("x1^2 + x2^2");
    double prev = -1;
    for (double t : {3.0, 5.0, 8.0, 11.0, 14.0}) {
        double v = count(B2, circ, t);
        CHECK(v >= prev);
        prev = v;
    }

    CountOptions tight;
    tight.max_points = 1000;
    auto unit = builtin(FnKind::Unit, 0, 2);
    CHECK_THROWS_AS(count(unit, parse_poly("x1 + x2"), 1.0e7, tight),
                    BudgetError);
    CHECK_THROWS_AS(count(unit, parse_poly("x1 + x2"), 200.0, tight),
                    BudgetError);
}

TEST_CASE("count: value independent of the thread count") {
    auto lam = builtin(FnKind::MangoldtProduct, 0, 2);
    GenPoly lin = parse_poly("x1 + x2");
    CountOptions one, three, eight;
    one.threads = 1;
    three.threads = 3;
    eight.threads = 8;
    double v1 = count(lam, lin, 500.0, one);
    double v3 = count(lam, lin, 500.0, three);
    double v8 = count(lam, lin, 500.0, eight);
    CHECK(v1 == v3);
    CHECK(v1 == v8);

    auto D2 = builtin(FnKind::ProductKfree, 2, 2);
    GenPoly prod = parse_poly("x1 x2");
    CHECK(count(D2, prod, 150.0, one) == count(D2, prod, 150.0, eight));
}

TEST_CASE("predict: unit weights over elliptic and product polynomials") {
    auto unit = builtin(FnKind::Unit, 0, 2);

    auto circ = predict(unit, parse_poly("x1^2 + x2^2"));
    CHECK(!circ.refused);
    CHECK(circ.iota == Rat(2));
    CHECK(circ.rho == 1);
    CHECK(circ.C0 == doctest::Approx(kPi / 4).epsilon(1e-5));
    CHECK(circ.C == doctest::Approx(kPi / 2).epsilon(1e-5));
    bool sectioned = false;
    for (const auto& line : circ.provenance)
        sectioned = sectioned || line.find("interior to cone(supp P)") !=
                                     std::string::npos;
    CHECK(sectioned);

    auto lin = predict(unit, parse_poly("x1 + x2"));
    CHECK(lin.iota == Rat(2));
    CHECK(lin.rho == 1);
    CHECK(lin.C0 == doctest::Approx(0.5).epsilon(1e-6));

    auto prod = predict(unit, parse_poly("x1 x2"));
    CHECK(prod.iota == Rat(2));
    CHECK(prod.rho == 2);
    CHECK(prod.C == doctest::Approx(4.0).epsilon(2e-4));
    CHECK(prod.C0 == doctest::Approx(2.0).epsilon(2e-4));
}

TEST_CASE("predict: squarefree and k-free weights") {
    auto B2 = builtin(FnKind::ComponentwiseKfree, 2, 2);
    auto pb = predict(B2, parse_poly("x1^2 + x2^2"));
    CHECK(pb.iota == Rat(2));
    CHECK(pb.rho == 1);
    // (6/pi^2)^2 * pi/4
    CHECK(pb.C0 == doctest::Approx(9.0 / (kPi * kPi * kPi)).epsilon(1e-5));

    auto D2 = builtin(FnKind::ProductKfree, 2, 2);
    auto pd = predict(D2, parse_poly("x1^2 + x2^2"), 1e-6);
    // prod_p (1-1/p)^2 (1+2/p) times the quarter-circle constant
    double H = 0.2867474284344787;
    CHECK(pd.rho == 1);
    CHECK(pd.C0 == doctest::Approx(H * kPi / 4).epsilon(2e-6));
    CHECK(pd.C0_err < 1e-5);
}

TEST_CASE("predict: mangoldt and logprime products") {
    auto lam = builtin(FnKind::MangoldtProduct, 0, 2);
    auto pl = predict(lam, parse_poly("x1 + x2"));
    CHECK(pl.iota == Rat(2));
    CHECK(pl.rho == 1);
    CHECK(pl.C0 == doctest::Approx(0.5).epsilon(1e-6));

    auto lp = builtin(FnKind::LogprimeProduct, 0, 2);
    auto pq = predict(lp, parse_poly("x1 x2"));
    CHECK(pq.rho == 2);
    CHECK(pq.C0 == doctest::Approx(2.0).epsilon(2e-4));
}

TEST_CASE("predict: agrees with the Monte Carlo sublevel volume") {
    auto unit = builtin(FnKind::Unit, 0, 2);
    GenPoly P = parse_poly("x1^3 + x2^3 + x1 x2^2");
    auto pr = predict(unit, P);
    auto mc = sublevel_volume(P, 4000000, 99);
    CHECK(std::fabs(pr.C0 - mc.value) <= 4 * mc.std_error + pr.C0_err);

    auto unit3 = builtin(FnKind::Unit, 0, 3);
    auto ps = predict(unit3, parse_poly("x1^2 + x2^2 + x3^2"), 1e-6);
    CHECK(ps.iota == Rat(3));
    CHECK(ps.rho == 1);
    CHECK(ps.C0 == doctest::Approx(kPi / 6).epsilon(2e-3));
}

TEST_CASE("predict: refusal outside the support cone") {
    auto unit = builtin(FnKind::Unit, 0, 2);
    // support directions cluster away from the diagonal
    auto r = predict(unit, parse_poly("x1^3 + x1^2 x2"));
    CHECK(r.refused);
    CHECK(r.iota == Rat(3));
    CHECK(!r.iota_attained);
    CHECK(r.rho == 0);
    CHECK(r.provenance.front().find("refused") != std::string::npos);

    // a table weight whose boundary surface meets the open cone at a
    // minimizer strictly inside: the infimum is attained
    ArithmeticFunction g;
    g.kind = FnKind::UniformMultiplicative;
    g.n = 2;
    g.table[{3, 0}] = 1.0;
    g.table[{0, 3}] = 1.0;
    g.table[{1, 1}] = 1.0;
    g.name = "table";
    auto ra = predict(g, parse_poly("x1^4 x2 + x1^3 x2^2"));
    CHECK(ra.refused);
    CHECK(ra.iota == Rat(1));
    CHECK(ra.iota_attained);

    CHECK_THROWS_AS(predict(unit, parse_poly("x1^2 + x2")), DomainError);
    auto unit3 = builtin(FnKind::Unit, 0, 3);
    CHECK_THROWS_AS(predict(unit3, parse_poly("x1 + x2")), DomainError);
}

TEST_CASE("convergence report: triangle counts approach t^2/2") {
    auto unit = builtin(FnKind::Unit, 0, 2);
    auto rep = convergence_report(unit, parse_poly("x1 + x2"),
                                  {10.0, 100.0, 1000.0});
    REQUIRE(rep.counts.size() == 3);
    CHECK(rep.counts[0] == 45.0);
    CHECK(rep.counts[2] == 499500.0);
    CHECK(rep.ratios[0] < rep.ratios[1]);
    CHECK(rep.ratios[1] < rep.ratios[2]);
    CHECK(rep.ratios[2] == doctest::Approx(0.999).epsilon(1e-6));
    CHECK(rep.fitted_exponent == doctest::Approx(2.0).epsilon(0.01));
    CHECK(rep.pass);
    CHECK(rep.wall_times.size() == 3);
}

TEST_CASE("convergence report: squarefree pairs in the disc") {
    auto B2 = builtin(FnKind::ComponentwiseKfree, 2, 2);
    auto rep = convergence_report(B2, parse_poly("x1^2 + x2^2"),
                                  {250.0, 500.0, 1000.0, 2000.0}, {}, 0.01);
    CHECK(rep.ratios.back() > 0.99);
    CHECK(rep.ratios.back() < 1.01);
    CHECK(rep.pass);
    CHECK(rep.fitted_exponent == doctest::Approx(2.0).epsilon(0.01));
    for (std::size_t i = 1; i < rep.counts.size(); ++i)
        CHECK(rep.counts[i] >= rep.counts[i - 1]);
}

TEST_CASE("convergence report: mangoldt weights converge slowly") {
    auto lam = builtin(FnKind::MangoldtProduct, 0, 2);
    auto rep = convergence_report(lam, parse_poly("x1 + x2"),
                                  {1000.0, 3000.0}, {}, 0.1);
    CHECK(rep.ratios.back() > 0.9);
    CHECK(rep.ratios.back() < 1.1);
    CHECK(rep.pass);
}

TEST_CASE("convergence report: validation") {
    auto unit = builtin(FnKind::Unit, 0, 2);
    GenPoly lin = parse_poly("x1 + x2");
    CHECK_THROWS_AS(convergence_report(unit, lin, {}), DomainError);
    CHECK_THROWS_AS(convergence_report(unit, lin, {10.0, 10.0}), DomainError);
    CHECK_THROWS_AS(convergence_report(unit, lin, {10.0, 5.0}), DomainError);
    CHECK_THROWS_AS(
        convergence_report(unit, parse_poly("x1^3 + x1^2 x2"), {10.0}),
        DomainError);
}

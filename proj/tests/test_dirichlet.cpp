#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "mzl/arith.hpp"
#include "mzl/dirichlet.hpp"
#include "mzl/error.hpp"
#include "mzl/polyring.hpp"
#include "mzl/special.hpp"

using namespace mzl;

namespace {
constexpr double PI = 3.141592653589793238462643;

GenPoly monomial(int n, const std::vector<long>& gamma) {
    GenPoly p;
    p.n = n;
    RatVec e;
    for (long g : gamma) e.push_back(Rat(g));
    p.terms[e] = 1.0;
    return p;
}
}  // namespace

TEST_CASE("complex gamma function") {
    CHECK(std::abs(cgamma({0.5, 0}) - std::sqrt(PI)) < 1e-13);
    CHECK(std::abs(cgamma({5, 0}) - 24.0) < 1e-12);
    CHECK(std::abs(cgamma({1, 0}) - 1.0) < 1e-14);
    // table value of Gamma(1+i)
    std::complex<double> g1i = cgamma({1, 1});
    CHECK(std::abs(g1i.real() - 0.4980156681183560) < 1e-12);
    CHECK(std::abs(g1i.imag() + 0.1549498283018107) < 1e-12);
    // |Gamma(it)|^2 = pi / (t sinh(pi t))
    for (double t : {0.5, 1.0, 3.0, 7.5}) {
        double lhs = std::norm(cgamma({0, t}));
        double rhs = PI / (t * std::sinh(PI * t));
        CHECK(std::abs(lhs - rhs) < 1e-12 * rhs);
    }
    // reflection through negative half plane
    std::complex<double> a = cgamma({-1.5, 0});
    CHECK(std::abs(a - 4.0 * std::sqrt(PI) / 3.0) < 1e-12);
    CHECK_THROWS_AS(cgamma({0, 0}), DomainError);
    CHECK_THROWS_AS(cgamma({-3, 0}), DomainError);
}

TEST_CASE("Y integral closed forms") {
    // int over [1,inf)^2 of (x1+x2)^-s = 2^(2-s)/((s-1)(s-2))
    GenPoly plin = parse_poly("x1 + x2");
    for (double s : {3.0, 4.5, 7.0}) {
        double exact = std::pow(2.0, 2 - s) / ((s - 1) * (s - 2));
        auto r = eval_Y(plin, s);
        CHECK(std::abs(r.value - exact) < std::max(3 * r.error, 1e-10 * exact));
        CHECK(r.error < 1e-5 * exact);
    }
    CHECK(std::abs(eval_Y(plin, 3.0).value - 0.25) < 1e-9);

    // monomials factor: Y(x1 x2; s) = (s-1)^-2, Y(x; 2) = 1
    auto rm = eval_Y(parse_poly("x1 x2"), 2.0);
    CHECK(std::abs(rm.value - 1.0) < 1e-8);
    auto r1 = eval_Y(parse_poly("x1"), 2.0);
    CHECK(std::abs(r1.value - 1.0) < 1e-10);

    // constant term shifts the base: 3^(2-s)/((s-1)(s-2))
    GenPoly paff = parse_poly("1 + x1 + x2");
    double s = 3.5;
    double exact = std::pow(3.0, 2 - s) / ((s - 1) * (s - 2));
    auto ra = eval_Y(paff, s);
    CHECK(std::abs(ra.value - exact) < std::max(3 * ra.error, 1e-9 * exact));

    // three variables, separable
    auto r3 = eval_Y(monomial(3, {1, 1, 1}), 2.0, 1e-6);
    CHECK(std::abs(r3.value - 1.0) < 1e-5);
}

TEST_CASE("Y homogeneity in the bound") {
    // Y(c P; s) = c^-s Y(P; s)
    GenPoly p = parse_poly("x1^2 + x2^2");
    GenPoly q = p;
    for (auto& [e, c] : q.terms) c *= 3.7;
    for (double s : {1.5, 2.5}) {
        auto a = eval_Y(p, s);
        auto b = eval_Y(q, s);
        double want = std::pow(3.7, -s) * a.value;
        CHECK(std::abs(b.value - want) <
              3 * (b.error + std::pow(3.7, -s) * a.error) + 1e-12);
    }
}

TEST_CASE("Y divergence") {
    CHECK_THROWS_AS(eval_Y(parse_poly("x1 + x2"), 2.0), DomainError);
    CHECK_THROWS_AS(eval_Y(parse_poly("x1 + x2"), 1.2), DomainError);
    CHECK_THROWS_AS(eval_Y(parse_poly("x1"), 1.0), DomainError);
    CHECK_THROWS_AS(eval_Y(parse_poly("x1 x2"), 0.9), DomainError);
}

TEST_CASE("Z lattice sum closed forms") {
    // Z(1; x1 x2; 4) = zeta(2)^2 = pi^4/36
    GenPoly pxy = parse_poly("x1 x2");
    auto f1 = builtin(FnKind::Unit, 0, 2);
    auto r = eval_Z(f1, pxy, 4.0);
    double exact = std::pow(PI, 4) / 36.0;
    CHECK(std::abs(r.value - exact) < std::max(3 * r.error, 1e-8 * exact));
    CHECK(r.error < 1e-5 * exact);

    // n = 1: Z(1; x; 2) = zeta(2)
    auto r1 = eval_Z(builtin(FnKind::Unit, 0, 1), parse_poly("x1"), 2.0);
    CHECK(std::abs(r1.value - PI * PI / 6) < std::max(3 * r1.error, 1e-9));

    // elliptic: brute-force partial sum as oracle
    GenPoly pell = parse_poly("x1^2 + x2^2");
    double brute = 0;
    for (int m1 = 3000; m1 >= 1; --m1)
        for (int m2 = 3000; m2 >= 1; --m2) {
            double q = double(m1) * m1 + double(m2) * m2;
            brute += 1.0 / (q * q * q);
        }
    auto re = eval_Z(builtin(FnKind::Unit, 0, 2), pell, 6.0);
    CHECK(std::abs(re.value - brute) < std::max(3 * re.error, 1e-10 * brute));
}

TEST_CASE("Z on monomials equals a product of zeta values") {
    std::mt19937 rng(2468);
    auto f = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    for (int trial = 0; trial < 10; ++trial) {
        int n = f(1, 2);
        std::vector<long> gamma(n);
        long d = 0, gmin = 100;
        for (auto& g : gamma) {
            g = f(1, 4);
            d += g;
            gmin = std::min(gmin, g);
        }
        double absc = double(d) / double(gmin);
        double s = absc + 0.3 +
                   std::uniform_real_distribution<double>(0, 2.5)(rng);
        auto r = eval_Z(builtin(FnKind::Unit, 0, n), monomial(n, gamma), s);
        double expect = 1;
        for (long g : gamma) expect *= zeta_real(double(g) * s / double(d));
        CHECK(std::abs(r.value - expect) <
              std::max(5 * r.error, 1e-7 * expect));
    }
}

TEST_CASE("Z close to the abscissa stays accurate") {
    // Z(1; x1 x2; 2.05) = zeta(1.025)^2, a genuinely stiff case
    double z = zeta_real(1.025);
    auto r = eval_Z(builtin(FnKind::Unit, 0, 2), parse_poly("x1 x2"), 2.05);
    CHECK(std::abs(r.value - z * z) < std::max(4 * r.error, 2e-6 * z * z));
    CHECK(r.error < 1e-4 * z * z);
    // below the working margin
    CHECK_THROWS_AS(
        eval_Z(builtin(FnKind::Unit, 0, 2), parse_poly("x1 x2"), 2.02),
        DomainError);
}

TEST_CASE("Z with arithmetic weights") {
    // sum mu^2(m)/m^4 = zeta(4)/zeta(8)
    auto b2 = builtin(FnKind::ComponentwiseKfree, 2, 1);
    auto r = eval_Z(b2, parse_poly("x1"), 4.0);
    double exact = (std::pow(PI, 4) / 90.0) / (std::pow(PI, 8) / 9450.0);
    CHECK(std::abs(r.value - exact) < r.error + 1e-10);
    CHECK(r.error < 1e-6);

    // sum Lambda(m)/m^3 via prime powers
    auto lam = builtin(FnKind::MangoldtProduct, 0, 1);
    auto rl = eval_Z(lam, parse_poly("x1"), 3.0);
    double oracle = 0;
    for_each_prime(100000, [&](std::uint64_t p) {
        double lp = std::log(double(p));
        double q = double(p) * p * p;
        oracle += lp / (q - 1.0);  // sums log p (p^-3 + p^-6 + ...)
    });
    CHECK(std::abs(rl.value - oracle) < rl.error + 1e-8);
    CHECK(rl.error < 1e-4);
}

TEST_CASE("pole ladder recovers order and leading constant") {
    // simple pole: (s-2) Y(x1+x2; s) -> 1
    auto EY = make_Y_evaluator(parse_poly("x1 + x2"));
    auto fy = pole_fit(EY, 2.0, 3);
    CHECK(fy.order == 1);
    CHECK(std::abs(fy.leading - 1.0) < 0.01);
    CHECK(fy.stable);

    // double pole: (s-1)^2 Y(x1 x2; s) -> 1
    auto EM = make_Y_evaluator(parse_poly("x1 x2"));
    auto fm = pole_fit(EM, 1.0, 3);
    CHECK(fm.order == 2);
    CHECK(std::abs(fm.leading - 1.0) < 0.01);

    // Z(1; x1 x2) at s=2: (s-2)^2 zeta(s/2)^2 -> 4
    auto EZ = make_Z_evaluator(builtin(FnKind::Unit, 0, 2),
                               parse_poly("x1 x2"));
    auto fz = pole_fit(EZ, 2.0, 3, 0.8, 4);
    CHECK(fz.order == 2);
    CHECK(std::abs(fz.leading - 4.0) < 0.02 * 4.0);

    // Z(1; x1^2+x2^2) at s=2: simple pole, residue pi/2
    auto EE = make_Z_evaluator(builtin(FnKind::Unit, 0, 2),
                               parse_poly("x1^2 + x2^2"));
    auto fe = pole_fit(EE, 2.0, 3, 0.8, 4);
    CHECK(fe.order == 1);
    CHECK(std::abs(fe.leading - PI / 2) < 0.02 * PI / 2);
}

TEST_CASE("pole ladder refuses an analytic point") {
    SeriesEvaluator E;
    E.name = "analytic";
    E.abscissa = 0;
    E.min_offset = 1e-6;
    E.evaluate = [](double s) {
        return ValueWithError{std::exp(s), 1e-13};
    };
    CHECK_THROWS_AS(pole_fit(E, 1.0, 3), ConvergenceError);
}

TEST_CASE("Mellin contour identity, one fold") {
    auto c1 = mellin_identity_check(1, {1, 1}, {0.5}, 2.0);
    CHECK(std::abs(c1.lhs - 0.25) < 1e-14);
    CHECK(c1.residual < 1e-8);

    auto c2 = mellin_identity_check(1, {1, 3}, {0.5}, 3.0);
    CHECK(std::abs(c2.lhs - 1.0 / 32.0) < 1e-14);
    CHECK(c2.residual < 1e-8);

    // off-center contour and uneven weights
    auto c3 = mellin_identity_check(1, {2.5, 0.75}, {1.25}, 4.0);
    CHECK(c3.residual < 1e-8 * std::abs(c3.lhs) + 1e-12);
}

TEST_CASE("Mellin contour identity, two folds") {
    auto c = mellin_identity_check(2, {1, 1, 1}, {0.5, 0.5}, 3.0);
    CHECK(std::abs(c.lhs - 2.0 / 27.0) < 1e-14);
    CHECK(c.residual < 1e-6);

    auto c2 = mellin_identity_check(2, {1, 2, 0.5}, {0.4, 0.7}, 3.5);
    CHECK(c2.residual < 1e-6 * std::max(1.0, std::abs(c2.lhs)));
}

TEST_CASE("Mellin contour preconditions") {
    CHECK_THROWS_AS(mellin_identity_check(3, {1, 1, 1, 1}, {0.5, 0.5, 0.5}, 4.0),
                    DomainError);
    CHECK_THROWS_AS(mellin_identity_check(1, {1}, {0.5}, 2.0), DomainError);
    CHECK_THROWS_AS(mellin_identity_check(1, {1, 1}, {0.5}, 0.4), DomainError);
    CHECK_THROWS_AS(mellin_identity_check(1, {1, -1}, {0.5}, 2.0), DomainError);
    CHECK_THROWS_AS(mellin_identity_check(1, {1, 1}, {-0.5}, 2.0), DomainError);
}

// End-to-end acceptance run: each numbered check prints one PASS/FAIL line
// and the process exits nonzero if any check fails. Thresholds are the
// project's release gates, not statistical guesses; see README.md.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mzl/arith.hpp"
#include "mzl/cli.hpp"
#include "mzl/constants.hpp"
#include "mzl/counting.hpp"
#include "mzl/dirichlet.hpp"
#include "mzl/error.hpp"
#include "mzl/newton.hpp"
#include "mzl/polyring.hpp"
#include "mzl/special.hpp"

using namespace mzl;

namespace {

int g_failures = 0;

class Timer {
  public:
    Timer() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - t0_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

void criterion(int id, bool pass, const std::string& detail) {
    if (!pass) ++g_failures;
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream o;
    o.precision(prec);
    o << v;
    return o.str();
}

constexpr double kPi = 3.141592653589793238462643;

// random polynomial with every pure power x_i^d present and positive
// coefficients: elliptic of degree d by construction
std::string random_elliptic(std::mt19937& rng, int& n_out, int& d_out) {
    std::uniform_int_distribution<int> nd(1, 4), dd(1, 6), cd(1, 5);
    int n = nd(rng), d = dd(rng);
    std::ostringstream o;
    for (int i = 1; i <= n; ++i) {
        if (i > 1) o << " + ";
        o << cd(rng) << " x" << i << "^" << d;
    }
    std::uniform_int_distribution<int> cnt(0, 3), tot(1, d),
        axis(0, n - 1);
    int extras = cnt(rng);
    for (int e = 0; e < extras; ++e) {
        std::vector<int> g(n, 0);
        int budget = tot(rng);
        for (int j = 0; j < budget; ++j) ++g[axis(rng)];
        o << " + " << cd(rng);
        for (int i = 0; i < n; ++i)
            if (g[i] > 0) o << " x" << i + 1 << "^" << g[i];
    }
    n_out = n;
    d_out = d;
    return o.str();
}

// divisor-sum oracle for the number of (m1,m2) with m1 m2 <= x
double hyperbola_count(double x) {
    std::uint64_t q = static_cast<std::uint64_t>(std::sqrt(x));
    while ((q + 1) * (q + 1) <= x) ++q;
    while (q * q > x) --q;
    long double acc = 0;
    for (std::uint64_t k = 1; k <= q; ++k)
        acc += std::floor(x / static_cast<double>(k));
    return static_cast<double>(2 * acc) -
           static_cast<double>(q) * static_cast<double>(q);
}

void run_criterion_1() {
    Timer tm;
    std::mt19937 rng(42);
    int exact = 0;
    const int total = 50;
    std::string first_bad;
    for (int i = 0; i < total; ++i) {
        int n = 0, d = 0;
        std::string text = random_elliptic(rng, n, d);
        GenPoly P = parse_poly(text);
        auto df = diagonal_face(polyhedron_at_infinity(support(P)));
        if (df.sigma0 == Rat(n) / Rat(d) && df.rho0 == 1)
            ++exact;
        else if (first_bad.empty())
            first_bad = text;
    }
    double secs = tm.seconds();
    bool pass = exact == total && secs < 10.0;
    std::string detail = "elliptic diagonal law: " + std::to_string(exact) +
                         "/" + std::to_string(total) +
                         " exact sigma0 = n/d, rho0 = 1; " + fmt(secs, 3) +
                         " s";
    if (!first_bad.empty()) detail += "; first miss: " + first_bad;
    criterion(1, pass, detail);
}

void run_criterion_2() {
    Timer tm;
    const std::vector<std::string> polys = {
        "x1^2 + x2^2",
        "x1^2 + x1 x2 + x2^2",
        "x1^4 + x2^4",
        "x1^4 + x1^3 x2 + x2^4",
        "x1^3 + x2^3",
        "x1^6 + x1^3 x2^3 + x2^6",
        "x1^2 + x2^2 + x3^2",
        "x1^2 + x2^2 + x3^2 + x1 x3",
        "x1^3 + x2^3 + x3^3 + x1 x2 x3",
        "x1^4 + x2^4 + x3^4 + x1^2 x2^2",
    };
    int ok = 0;
    double worst_pull = 0;
    for (const auto& text : polys) {
        GenPoly P = parse_poly(text);
        double d = to_double(poly_degree(P));
        double n = P.n;
        auto A = elliptic_volume_constant(P, 1e-8);
        auto V = sublevel_volume(homogeneous_part(P), 10000000, 20260814, 1);
        double gap = std::fabs(d * A.value - n * V.value);
        double allowed = 3 * n * V.std_error + d * A.error;
        worst_pull = std::max(worst_pull, gap / allowed);
        if (gap <= allowed) ++ok;
    }
    double secs = tm.seconds();
    bool pass = ok == static_cast<int>(polys.size()) && secs < 60.0;
    criterion(2, pass,
              "d*A0 = n*Vol on " + std::to_string(ok) + "/" +
                  std::to_string(polys.size()) +
                  " elliptic cases (worst pull " + fmt(worst_pull, 3) +
                  " of allowance); " + fmt(secs, 3) + " s");
}

void run_criterion_3() {
    RatVec e1{Rat(1), Rat(0)}, e2{Rat(0), Rat(1)};
    auto ladder = volume_constant({e1, e2}, {1, 1}, {1.0, 1.0}, 1e-8);
    bool ok1 = std::fabs(ladder.value - 1.0) <= 0.01;

    GenPoly circ = parse_poly("x1^2 + x2^2");
    auto ell = elliptic_volume_constant(circ, 1e-9);
    bool ok2 = std::fabs(ell.value - kPi / 4) <= 0.01 * (kPi / 4);

    auto dir1 = volume_constant_direct(circ, 1e-9);
    auto dir2 = volume_constant_direct(parse_poly("x1 + x2"), 1e-9);
    bool ok3 = std::fabs(dir1.value - kPi / 4) <= 0.01 * (kPi / 4) &&
               std::fabs(dir2.value - 1.0) <= 0.01;

    criterion(3, ok1 && ok2 && ok3,
              "volume constants: ladder A0({e1,e2},1,(1,1)) = " +
                  fmt(ladder.value, 8) + " (want 1), quarter circle A0 = " +
                  fmt(ell.value, 8) + " (want pi/4), direct route " +
                  fmt(dir1.value, 8) + " / " + fmt(dir2.value, 8));
}

void run_criterion_4() {
    Timer tm;
    double worst1 = 0;
    const double rhos[3] = {0.35, 0.8, 1.2};
    int idx = 0;
    for (double w1 : {0.5, 1.0, 2.0})
        for (double s : {2.5, 4.0, 6.0}) {
            auto mc = mellin_identity_check(1, {1.0, w1}, {rhos[idx++ % 3]},
                                            s);
            worst1 = std::max(worst1, mc.residual);
        }
    double worst2 = 0;
    const std::vector<std::vector<double>> wpairs = {
        {1.0, 1.0}, {2.0, 0.5}, {0.75, 1.3}};
    const std::vector<std::vector<double>> contours = {
        {0.5, 0.5}, {0.4, 0.7}, {0.6, 0.9}};
    idx = 0;
    for (const auto& wp : wpairs)
        for (double s : {3.0, 4.2, 5.5}) {
            auto mc = mellin_identity_check(2, {1.0, wp[0], wp[1]},
                                            contours[idx++ % 3], s);
            worst2 = std::max(worst2, mc.residual);
        }
    double secs = tm.seconds();
    bool pass = worst1 < 1e-8 && worst2 < 1e-6 && secs < 30.0;
    criterion(4, pass,
              "inverse-Mellin residuals: r=1 max " + fmt(worst1, 3) +
                  " (< 1e-8), r=2 max " + fmt(worst2, 3) + " (< 1e-6); " +
                  fmt(secs, 3) + " s");
}

void run_criterion_5() {
    auto unit = builtin(FnKind::Unit, 0, 2);
    auto zev = make_Z_evaluator(unit, parse_poly("x1 x2"), 1e-7);
    auto zf = pole_fit(zev, 2.0, 4);
    bool okz = zf.order == 2 && std::fabs(zf.leading / 4.0 - 1) <= 0.02;

    auto yev = make_Y_evaluator(parse_poly("x1 + x2"), 1e-7);
    auto yf = pole_fit(yev, 2.0, 4);
    bool oky = yf.order == 1 && std::fabs(yf.leading - 1.0) <= 0.01;

    criterion(5, okz && oky,
              "pole fits at s=2: Z(1;x1x2) order " +
                  std::to_string(zf.order) + ", leading " +
                  fmt(zf.leading, 8) + " (want 4); Y(x1+x2) order " +
                  std::to_string(yf.order) + ", leading " +
                  fmt(yf.leading, 8) + " (want 1)");
}

void run_criterion_6() {
    Timer tm;
    auto unit = builtin(FnKind::Unit, 0, 2);
    GenPoly circ = parse_poly("x1^2 + x2^2");
    double t = 2000;
    double N = count(unit, circ, t, {});
    double secs = tm.seconds();
    double rel = std::fabs(N / (t * t) / (kPi / 4) - 1);
    bool pass = rel <= 0.005 && secs < 10.0;
    criterion(6, pass,
              "quarter-disc count: N = " + fmt(N, 10) + ", N/t^2 = " +
                  fmt(N / (t * t), 8) + " vs pi/4, rel gap " + fmt(rel, 3) +
                  " (<= 0.005); " + fmt(secs, 3) + " s");
}

void run_criterion_7() {
    auto B2 = builtin(FnKind::ComponentwiseKfree, 2, 2);
    GenPoly circ = parse_poly("x1^2 + x2^2");
    double t = 2000;
    auto pr = predict(B2, circ, 1e-7);
    double closed = 9.0 / (kPi * kPi * kPi);
    double N = count(B2, circ, t, {});
    double scaled = N / (t * t);
    bool target_ok = std::fabs(pr.C0 / closed - 1) <= 1e-3;
    bool count_ok = std::fabs(scaled / closed - 1) <= 0.01;
    criterion(7, target_ok && count_ok,
              "componentwise squarefree: computed C0 = " + fmt(pr.C0, 8) +
                  " vs 9/pi^3 = " + fmt(closed, 8) + "; N/t^2 = " +
                  fmt(scaled, 8) + ", rel gap " +
                  fmt(std::fabs(scaled / closed - 1), 3) + " (<= 0.01)");
}

void run_criterion_8() {
    auto D2 = builtin(FnKind::ProductKfree, 2, 2);
    GenPoly circ = parse_poly("x1^2 + x2^2");
    double t = 2000;
    auto desc = finite_type_descriptor(D2);
    auto H = euler_product(D2, desc.c, 1e-8);
    double target = H.value * kPi / 4;
    double N = count(D2, circ, t, {});
    double rel = std::fabs(N / (t * t) / target - 1);
    bool pass = rel <= 0.015;
    criterion(8, pass,
              "squarefree product: H = " + fmt(H.value, 10) + " +- " +
                  fmt(H.tail_bound, 3) + ", N/t^2 = " + fmt(N / (t * t), 8) +
                  " vs H*pi/4 = " + fmt(target, 8) + ", rel gap " +
                  fmt(rel, 3) + " (<= 0.015)");
}

void run_criterion_9() {
    auto unit = builtin(FnKind::Unit, 0, 2);
    GenPoly prod = parse_poly("x1 x2");
    std::vector<double> grid = {100, 160, 250, 400, 630, 1000};
    auto pr = predict(unit, prod, 1e-7);

    bool oracle_ok = true;
    std::vector<double> counts(grid.size()), ratios(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        counts[i] = count(unit, prod, grid[i], {});
        if (counts[i] != hyperbola_count(grid[i] * grid[i]))
            oracle_ok = false;
        ratios[i] = counts[i] / (pr.C0 * grid[i] * grid[i] *
                                 std::log(grid[i]));
    }
    double rmax = ratios[0], rmin = ratios[0];
    for (double r : ratios) {
        rmax = std::max(rmax, r);
        rmin = std::min(rmin, r);
    }
    double drift = (rmax - rmin) / ratios.back();

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double x = std::log(std::log(grid[i]));
        double y = std::log(counts[i] / (grid[i] * grid[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double nn = static_cast<double>(grid.size());
    double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);

    bool pass = oracle_ok && pr.rho == 2 && drift < 0.05 && slope > 0.9 &&
                slope < 1.1;
    criterion(9, pass,
              std::string("divisor-type growth: hyperbola oracle ") +
                  (oracle_ok ? "exact" : "MISMATCH") + ", C0 = " +
                  fmt(pr.C0, 8) + ", ratio drift " + fmt(drift, 3) +
                  " (< 0.05), log-power slope " + fmt(slope, 4) +
                  " (want ~= rho - 1 = 1)");
}

void run_criterion_10() {
    auto lam = builtin(FnKind::MangoldtProduct, 0, 2);
    GenPoly lin = parse_poly("x1 + x2");
    double t = 3000;
    double N = count(lam, lin, t, {});
    double ratio = N / (t * t / 2);
    bool pass = ratio >= 0.9 && ratio <= 1.1;
    criterion(10, pass,
              "Mangoldt simplex: sum = " + fmt(N, 10) + ", ratio to t^2/2 = " +
                  fmt(ratio, 6) + " (in [0.9, 1.1])");
}

void run_criterion_11() {
    bool pass = true;
    std::string detail = "k-free density vs 1/zeta(k):";
    for (int k : {2, 3, 4}) {
        auto f = builtin(FnKind::ProductKfree, k, 1);
        auto D = finite_type_descriptor(f);
        auto ep = euler_product(f, D.c, 1e-9);
        double delta = ep.value - 1.0 / zeta_real(k);
        if (std::fabs(delta) > 1e-9) pass = false;
        detail += " k=" + std::to_string(k) + " delta " + fmt(delta, 2) +
                  ";";
    }
    criterion(11, pass, detail + " (all within 1e-9)");
}

void run_criterion_12() {
    Timer tm;
    CliOptions one;
    CliOptions eight;
    eight.threads = 8;
    std::string r1 = run_verify("all", one).to_json();
    std::string r8 = run_verify("all", eight).to_json();
    std::string r1b = run_verify("all", one).to_json();
    bool pass = r1 == r8 && r1 == r1b;
    criterion(12, pass,
              std::string("`verify all` reports byte-identical: repeat ") +
                  (r1 == r1b ? "yes" : "NO") + ", 1 vs 8 threads " +
                  (r1 == r8 ? "yes" : "NO") + " (" +
                  std::to_string(r1.size()) + " bytes); " + fmt(tm.seconds(), 3) +
                  " s");
}

}  // namespace

int main() {
    try {
        run_criterion_1();
        run_criterion_2();
        run_criterion_3();
        run_criterion_4();
        run_criterion_5();
        run_criterion_6();
        run_criterion_7();
        run_criterion_8();
        run_criterion_9();
        run_criterion_10();
        run_criterion_11();
        run_criterion_12();
    } catch (const std::exception& e) {
        std::printf("acceptance run aborted: %s\n", e.what());
        return 1;
    }
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}

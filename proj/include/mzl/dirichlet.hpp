#pragma once
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "mzl/arith.hpp"
#include "mzl/polyring.hpp"

namespace mzl {

struct ValueWithError {
    double value = 0;
    double error = 0;  // absolute
};

// integral of P(x)^{-s} over [1,inf)^n, evaluated in logarithmic coordinates
// with per-direction truncation; throws DomainError at or below the
// convergence abscissa sigma0(P)
ValueWithError eval_Y(const GenPoly& P, double s, double rel_tol = 1e-8);

// sum of f(m) P(m)^{-s/deg P} over N^n. The unit weight goes through an
// exact box sum plus integral-corrected boundary strips and stays accurate
// within 0.05 of the abscissa; other weights use the exact box sum with an
// envelope tail bound and need s comfortably inside convergence.
ValueWithError eval_Z(const ArithmeticFunction& f, const GenPoly& P, double s,
                      double rel_tol = 1e-7,
                      std::uint64_t max_points = 400000000ull);

// real-axis evaluator handle for pole fitting
struct SeriesEvaluator {
    std::string name;
    double abscissa = 0;    // predicted first singularity
    double min_offset = 0;  // evaluations need s >= abscissa + min_offset
    std::function<ValueWithError(double)> evaluate;
};

SeriesEvaluator make_Y_evaluator(const GenPoly& P, double rel_tol = 1e-7);
SeriesEvaluator make_Z_evaluator(const ArithmeticFunction& f,
                                 const GenPoly& P, double rel_tol = 1e-7);

struct PoleFit {
    double location = 0;
    int order = 0;       // q, smallest stable exponent
    double leading = 0;  // lim (s-a)^q E(s)
    double error = 0;    // extrapolation gap + propagated evaluation error
    bool stable = false;
    std::vector<double> rel_gap_by_order;  // diagnostics, index q-1
};

// Fits the pole order and leading coefficient of E at a from samples on
// s = a + h 2^{-j}, j = 0..J, by polynomial extrapolation of (s-a)^q E(s);
// h is widened when needed so the smallest rung stays >= E.min_offset.
// q is accepted when the last two extrapolants agree to 0.5% while the
// q-1 ladder diverges by more than 10x; ConvergenceError when no q fits.
PoleFit pole_fit(const SeriesEvaluator& E, double a, int q_max,
                 double h = 0.25, int J = 6);

struct MellinCheck {
    double lhs = 0;
    std::complex<double> rhs;
    double residual = 0;
    double truncation = 0;  // tail estimate of the contour cutoff
};

// |Gamma(s) (w_0+...+w_r)^{-s} - multi-line inverse-Mellin integral| with
// the contours Re z_i = rho_i, |Im z_i| <= 40 + 10|s|; r in {1, 2}
MellinCheck mellin_identity_check(int r, const std::vector<double>& w,
                                  const std::vector<double>& rho, double s);

}  // namespace mzl

#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mzl/arith.hpp"
#include "mzl/polyring.hpp"
#include "mzl/rational.hpp"

namespace mzl {

struct CountOptions {
    int threads = 1;
    std::uint64_t max_points = 2000000000ull;  // enumeration budget
};

// N(f;P;t): exact sum of f(m) over {m in N^n, m_i >= 1 : P(m) <= t^d} by
// pruned coordinate descent. The first coordinate's range is split into a
// fixed set of chunks processed in parallel and merged in index order, so
// the value does not depend on the thread count.
double count(const ArithmeticFunction& f, const GenPoly& P, double t,
             const CountOptions& opt = {});

// Growth data for N(f;P;t) ~ C0 t^iota (log t)^(rho-1) assembled from the
// first-meet data of f, the transposed-exponent constant A0 and the Euler
// product H of f at its distinguished point c.
//
// When c is not interior to the cone spanned by supp(P), only an upper-bound
// exponent is available: `refused` is set, iota holds the infimum of |y|
// over the boundary surface of f intersected with that open cone, and
// iota_attained records whether some minimizer lies strictly inside the
// cone. rho, C, C0 are meaningless in that regime and left zero.
struct AsymptoticPrediction {
    bool refused = false;
    Rat iota = 0;
    bool iota_attained = true;
    int rho = 0;
    double C = 0;
    double C_err = 0;
    double C0 = 0;
    double C0_err = 0;
    std::vector<std::string> provenance;  // hypothesis audit trail
};

AsymptoticPrediction predict(const ArithmeticFunction& f, const GenPoly& P,
                             double rel_tol = 1e-7);

struct CountReport {
    std::vector<double> t_grid;
    std::vector<double> counts;
    std::vector<double> predictions;  // C0 t^iota (log t)^(rho-1)
    std::vector<double> ratios;       // counts / predictions
    std::vector<double> wall_times;   // seconds per grid point
    AsymptoticPrediction prediction;
    double fitted_exponent = 0;  // log-log slope over the top half
    double ratio_tol = 0;
    bool pass = false;  // final ratio within ratio_tol of 1
};

CountReport convergence_report(const ArithmeticFunction& f, const GenPoly& P,
                               const std::vector<double>& t_grid,
                               const CountOptions& opt = {},
                               double ratio_tol = 0.05);

}  // namespace mzl

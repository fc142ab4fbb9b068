#pragma once
#include <cstdint>
#include <vector>

#include "mzl/polyring.hpp"
#include "mzl/rational.hpp"

namespace mzl {

// A set of polar vectors with pole multiplicities.
struct PolarType {
    int n = 0;
    std::vector<RatVec> I;
    std::vector<int> u;
};

// Transposed exponent data tying a polar type to a polynomial. The alphas
// are the columns of P's exponent matrix; each beta in I pushes forward to
// mu(beta) = sum_i beta_i alpha^i, with multiplicities merged on collisions.
struct MixedData {
    int n = 0;
    int r = 0;                   // term count of P
    std::vector<RatVec> alphas;  // n vectors in Q^r
    std::vector<RatVec> I_TP;
    std::vector<int> u_TP;
    int rho0_T = 0;
    int rho0_TP = 0;
    std::vector<double> b;       // coefficients of P in term order
};

MixedData mixed_exponents(const PolarType& T, const GenPoly& P);

// P_(I;u;b): repeat each beta in I u(beta) times as rows of a q x r matrix,
// transpose, and read the r columns as exponent vectors on q variables.
GenPoly build_generalized_polynomial(const std::vector<RatVec>& I,
                                     const std::vector<int>& u,
                                     const std::vector<double>& b);

struct ConstantEstimate {
    double value = 0;
    double error = 0;
    double sigma0 = 0;
    int rho0 = 0;
};

// A0(I;u;b) as the limit of (s-sigma0)^rho0 Y(1 + P_(I;u;b); s).
ConstantEstimate volume_constant(const std::vector<RatVec>& I,
                                 const std::vector<int>& u,
                                 const std::vector<double>& b,
                                 double rel_tol = 1e-7);

// A0(T;P) via the transpose construction.
ConstantEstimate mixed_volume_constant(const PolarType& T, const GenPoly& P,
                                       double rel_tol = 1e-7);

// Elliptic route: (1/d) * integral of P_d^{-n/d} over the simplex slice of
// the unit sphere (the simplex parametrization absorbs the Jacobian).
ConstantEstimate elliptic_volume_constant(const GenPoly& P,
                                          double rel_tol = 1e-9);

struct MonteCarloEstimate {
    double value = 0;
    double std_error = 0;
    std::uint64_t samples = 0;
};

// Monte Carlo volume of {x >= 0 : Pd(x) <= 1} for homogeneous elliptic Pd.
// Chunked streams keyed by (seed, chunk index); the result is independent of
// the thread count.
MonteCarloEstimate sublevel_volume(const GenPoly& Pd, std::uint64_t samples,
                                   std::uint64_t seed, int threads = 1);

// Direct polyhedral formula (n <= 3): n! Vol(Lambda) times the iterated
// integral of P_G0^{-sigma0} in adapted coordinates. All coordinate
// permutations realizing the required splitting are computed and must agree.
ConstantEstimate volume_constant_direct(const GenPoly& P,
                                        double rel_tol = 1e-9);

}  // namespace mzl

#pragma once
#include <complex>

namespace mzl {

// Gamma on the complex plane (Lanczos, ~1e-13 relative away from poles).
std::complex<double> cgamma(std::complex<double> z);

// Riemann zeta for real s > 1 (Euler-Maclaurin).
double zeta_real(double s);

}  // namespace mzl

#include "mzl/special.hpp"

#include <cmath>

#include "mzl/error.hpp"

namespace mzl {

namespace {
// Lanczos g = 7, nine coefficients.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

std::complex<double> cgamma_half_plane(std::complex<double> z) {
    // valid for Re z > 0.5; callers reflect first
    z -= 1.0;
    std::complex<double> x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    std::complex<double> t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}
}  // namespace

std::complex<double> cgamma(std::complex<double> z) {
    if (z.real() < 0.5) {
        if (z.imag() == 0.0 && z.real() == std::floor(z.real()))
            throw DomainError("gamma pole");
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        std::complex<double> s = std::sin(M_PI * z);
        return M_PI / (s * cgamma_half_plane(1.0 - z));
    }
    return cgamma_half_plane(z);
}

double zeta_real(double s) {
    if (s <= 1.0) throw DomainError("zeta_real requires s > 1");
    // Euler-Maclaurin with N = 64 and Bernoulli terms through B6; the first
    // omitted term is O(s^7 N^{-s-7}), far below 1e-15 for s >= 1.01.
    const int N = 64;
    double sum = 0;
    for (int k = N - 1; k >= 1; --k) sum += std::pow(k, -s);
    double Ns = std::pow(N, -s);
    sum += Ns * N / (s - 1.0);
    sum += 0.5 * Ns;
    double t = s * Ns / N;  // s N^{-s-1}
    sum += t / 12.0;
    t *= (s + 1.0) * (s + 2.0) / (N * static_cast<double>(N));
    sum -= t / 720.0;
    t *= (s + 3.0) * (s + 4.0) / (N * static_cast<double>(N));
    sum += t / 30240.0;
    return sum;
}

}  // namespace mzl

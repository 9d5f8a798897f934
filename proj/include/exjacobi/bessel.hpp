#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace exjacobi {

/// Normalized Bessel function j_a(z) = Gamma(a+1) (2/z)^a J_a(z), evaluated by
/// its power series sum_k (-1)^k Gamma(a+1)/(k! Gamma(k+a+1)) (z/2)^{2k}.
/// j_a(0) = 1. Intended for |z| <= 20; the alternating series loses accuracy
/// far beyond that.
inline std::complex<double> bessel_j_small(double alpha, std::complex<double> z) {
    if (alpha <= -1.0) throw std::domain_error("bessel_j_small: requires alpha > -1");
    const std::complex<double> q = -0.25 * z * z;  // -(z/2)^2
    std::complex<double> term(1.0, 0.0), sum(1.0, 0.0);
    for (int k = 0; k < 500; ++k) {
        term *= q / ((k + 1.0) * (k + 1.0 + alpha));
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

inline double bessel_j_small(double alpha, double z) {
    return bessel_j_small(alpha, std::complex<double>(z, 0.0)).real();
}

}  // namespace exjacobi

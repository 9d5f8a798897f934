#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "exjacobi/banded.hpp"
#include "exjacobi/csv.hpp"
#include "exjacobi/darboux.hpp"
#include "exjacobi/opmatrix.hpp"
#include "exjacobi/roots.hpp"
#include "exjacobi/spectra.hpp"

namespace exjacobi {

/// P_{2L,lambda}(z) = sum_{k=1}^L U_k (z^{L+k} + z^{L-k}) - lambda z^L.
/// Coefficient k equals coefficient 2L-k by construction, so z^{2L} P(1/z) = P(z).
struct SelfInversivePoly {
    int L = 0;
    std::vector<double> U;  // U[0] unused here; U[1..L]
    double lambda = 0.0;
    Polynomial expanded;
};

inline SelfInversivePoly build_self_inversive(const ExceptionalFamily& fam, double lambda) {
    SelfInversivePoly p;
    p.U = limit_coeffs(fam);
    p.L = fam.L;
    p.lambda = lambda;
    std::vector<double> c(2 * p.L + 1, 0.0);
    for (int k = 1; k <= p.L; ++k) {
        c[p.L + k] += p.U[k];
        c[p.L - k] += p.U[k];
    }
    c[p.L] -= lambda;
    p.expanded = Polynomial(std::move(c));
    return p;
}

/// True iff some zero lies on the unit circle (||z|-1| <= tol after the
/// Newton refinement inside poly_roots).
inline bool circle_zero_test(const SelfInversivePoly& p, double tol = 1e-8) {
    ComplexRootSet rs = poly_roots(p.expanded);
    for (Complex z : rs.roots)
        if (std::fabs(std::abs(z) - 1.0) <= tol) return true;
    return false;
}

/// Number of zeros strictly inside the unit disk (with multiplicity).
inline int roots_inside_disk(const SelfInversivePoly& p, double tol = 1e-8) {
    ComplexRootSet rs = poly_roots(p.expanded);
    int c = 0;
    for (std::size_t i = 0; i < rs.roots.size(); ++i)
        if (std::abs(rs.roots[i]) < 1.0 - tol) c += rs.multiplicity[i];
    return c;
}

/// Quick sufficient condition for no circle zeros: |a_L| > sum_{k != L} |a_k|.
/// Cross-validation only; the interval criterion is the real test.
inline bool coefficient_dominance_no_circle_zeros(const SelfInversivePoly& p) {
    const auto& c = p.expanded.coeffs();
    double mid = std::fabs(p.expanded[p.L]);
    double rest = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
        if (static_cast<int>(k) != p.L) rest += std::fabs(c[k]);
    return mid > rest;
}

struct StatementInterval {
    double lo = 0.0, hi = 0.0;
};

/// [2 sum (-1)^k U_k, 2 sum U_k]; also equal to [Q(-1), Q(1)] for the U_0-
/// shifted primitive. Both routes are computed and must agree to 1e-12.
inline StatementInterval statement_interval(const ExceptionalFamily& fam) {
    std::vector<double> U = limit_coeffs(fam);
    StatementInterval s;
    for (int k = 1; k <= fam.L; ++k) {
        s.hi += 2.0 * U[k];
        s.lo += 2.0 * (k % 2 ? -U[k] : U[k]);
    }
    Polynomial Q = q_primitive(fam, QConstantMode::MinusU0);
    if (std::fabs(s.lo - Q(-1.0)) > 1e-12 || std::fabs(s.hi - Q(1.0)) > 1e-12)
        throw NumericalError("statement_interval: U-sum and Q(+-1) routes disagree");
    return s;
}

/// n x n section of the banded Toeplitz matrix with symbol
/// 2 sum U_k cos(k theta) (zero diagonal, U_k on the k-th off-diagonals).
inline std::vector<double> toeplitz_section_spectrum(const ExceptionalFamily& fam, int n) {
    if (n < 2 * fam.L + 1)
        throw std::domain_error("toeplitz_section_spectrum: n must be at least 2L+1");
    std::vector<double> U = limit_coeffs(fam);
    BandedSymMatrix T(n, fam.L);
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= fam.L && i + d < n; ++d) T.set_entry(i, i + d, U[d]);
    return sym_eigenvalues(T, n);
}

/// CSV: lambda, lo, hi, inside_interval, has_circle_zero, n_roots_inside_disk.
inline void write_selfinv_csv(
    std::ostream& os, const std::vector<std::tuple<double, double, double, int, int, int>>& rows) {
    csv_row(os, "lambda", "lo", "hi", "inside_interval", "has_circle_zero", "n_roots_inside_disk");
    for (const auto& [lam, lo, hi, in, circ, nin] : rows) csv_row(os, lam, lo, hi, in, circ, nin);
}

}  // namespace exjacobi

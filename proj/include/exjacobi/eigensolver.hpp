#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "exjacobi/errors.hpp"

namespace exjacobi {

namespace detail {

inline double pythag(double a, double b) {
    double absa = std::fabs(a), absb = std::fabs(b);
    if (absa > absb) {
        double r = absb / absa;
        return absa * std::sqrt(1.0 + r * r);
    }
    return absb == 0.0 ? 0.0 : absb * std::sqrt(1.0 + (absa / absb) * (absa / absb));
}

}  // namespace detail

/// Implicit-shift QL on a symmetric tridiagonal matrix. d[0..n-1] is the
/// diagonal, e[0..n-2] the subdiagonal; on return d holds the eigenvalues
/// (unsorted). If z != nullptr it must point to a row-major n*n matrix whose
/// columns get rotated (pass identity to accumulate eigenvectors).
inline void tridiag_ql(std::vector<double>& d, std::vector<double> e, double* z = nullptr) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    e.resize(n, 0.0);  // e[n-1] used as workspace
    const double eps = 2.3e-16;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 30) throw NumericalError("tridiag_ql: no convergence in 30 iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = detail::pythag(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    e[i + 1] = r = detail::pythag(f, g);
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    d[i + 1] = g + (p = s * r);
                    g = c * r - b;
                    if (z) {
                        for (int k = 0; k < n; ++k) {
                            double f2 = z[k * n + i + 1];
                            z[k * n + i + 1] = s * z[k * n + i] + c * f2;
                            z[k * n + i] = c * z[k * n + i] - s * f2;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

/// Householder reduction of a dense symmetric matrix (row-major n*n) to
/// tridiagonal form. On return d/e hold the tridiagonal, and if
/// accumulate is true, a holds the orthogonal transform Q (A = Q T Q^T).
inline void householder_tridiag(std::vector<double>& a, int n, std::vector<double>& d,
                                std::vector<double>& e, bool accumulate) {
    d.assign(n, 0.0);
    std::vector<double> esub(n, 0.0);  // esub[i] couples (i-1, i), NR layout
    auto A = [&](int i, int j) -> double& { return a[i * n + j]; };
    for (int i = n - 1; i > 0; --i) {
        int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k < l + 1; ++k) scale += std::fabs(A(i, k));
            if (scale == 0.0) {
                esub[i] = A(i, l);
            } else {
                for (int k = 0; k < l + 1; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                double f = A(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                esub[i] = scale * g;
                h -= f * g;
                A(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j < l + 1; ++j) {
                    if (accumulate) A(j, i) = A(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k < j + 1; ++k) g += A(j, k) * A(i, k);
                    for (int k = j + 1; k < l + 1; ++k) g += A(k, j) * A(i, k);
                    esub[j] = g / h;
                    f += esub[j] * A(i, j);
                }
                double hh = f / (h + h);
                for (int j = 0; j < l + 1; ++j) {
                    f = A(i, j);
                    esub[j] = g = esub[j] - hh * f;
                    for (int k = 0; k < j + 1; ++k) A(j, k) -= f * esub[k] + g * A(i, k);
                }
            }
        } else {
            esub[i] = A(i, l);
        }
        d[i] = h;
    }
    if (accumulate) d[0] = 0.0;
    esub[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (accumulate) {
            int l = i;
            if (d[i] != 0.0) {
                for (int j = 0; j < l; ++j) {
                    double g = 0.0;
                    for (int k = 0; k < l; ++k) g += A(i, k) * A(k, j);
                    for (int k = 0; k < l; ++k) A(k, j) -= g * A(k, i);
                }
            }
            d[i] = A(i, i);
            A(i, i) = 1.0;
            for (int j = 0; j < l; ++j) A(j, i) = A(i, j) = 0.0;
        } else {
            d[i] = A(i, i);
        }
    }
    e.assign(n > 1 ? n - 1 : 0, 0.0);
    for (int i = 1; i < n; ++i) e[i - 1] = esub[i];
}

/// Eigenvalues of a dense symmetric matrix (row-major, destroyed), ascending.
inline std::vector<double> sym_eigenvalues_dense(std::vector<double> a, int n) {
    std::vector<double> d, e;
    householder_tridiag(a, n, d, e, false);
    tridiag_ql(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

/// Full symmetric eigendecomposition; columns of vectors are eigenvectors,
/// pairs sorted ascending by eigenvalue.
inline void sym_eigen_dense(std::vector<double> a, int n, std::vector<double>& values,
                            std::vector<double>& vectors) {
    std::vector<double> d, e;
    householder_tridiag(a, n, d, e, true);
    tridiag_ql(d, e, a.data());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });
    values.resize(n);
    vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int c = 0; c < n; ++c) {
        values[c] = d[idx[c]];
        for (int r = 0; r < n; ++r) vectors[r * n + c] = a[r * n + idx[c]];
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
inline std::vector<double> tridiag_eigenvalues(std::vector<double> diag,
                                               const std::vector<double>& offdiag) {
    tridiag_ql(diag, offdiag, nullptr);
    std::sort(diag.begin(), diag.end());
    return diag;
}

}  // namespace exjacobi

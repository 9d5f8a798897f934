#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "exjacobi/eigensolver.hpp"
#include "exjacobi/errors.hpp"
#include "exjacobi/polynomial.hpp"

namespace exjacobi {

/// Minimal dense matrix used for oracles and basis-change work.
struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<double> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    DenseMatrix transposed() const {
        DenseMatrix t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
        DenseMatrix r(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                double v = x(i, k);
                if (v == 0.0) continue;
                for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
            }
        return r;
    }
    DenseMatrix top_left(int n) const {
        DenseMatrix r(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r(i, j) = (*this)(i, j);
        return r;
    }
};

/// Symmetric banded matrix with half-bandwidth L, realized size n.
/// Storage is the upper band: band_[d][i] = entry(i, i+d), 0 <= d <= L.
/// Builders that receive a (numerically) non-symmetric source average the
/// two triangles and record the largest defect for the symmetry invariant.
class BandedSymMatrix {
  public:
    BandedSymMatrix() = default;
    BandedSymMatrix(int n, int half_bandwidth)
        : n_(n), hbw_(half_bandwidth), band_(half_bandwidth + 1) {
        for (int d = 0; d <= hbw_; ++d) band_[d].assign(std::max(0, n - d), 0.0);
    }

    static BandedSymMatrix from_entries(int n, int half_bandwidth,
                                        const std::function<double(int, int)>& f) {
        BandedSymMatrix m(n, half_bandwidth);
        double defect = 0.0;
        for (int i = 0; i < n; ++i)
            for (int d = 0; d <= half_bandwidth; ++d) {
                int j = i + d;
                if (j >= n) break;
                double up = f(i, j);
                double lo = d == 0 ? up : f(j, i);
                defect = std::max(defect, std::fabs(up - lo));
                m.band_[d][i] = 0.5 * (up + lo);
            }
        m.symmetry_defect_ = defect;
        return m;
    }

    int size() const { return n_; }
    int half_bandwidth() const { return hbw_; }
    double symmetry_defect() const { return symmetry_defect_; }

    double entry(int i, int j) const {
        int d = std::abs(i - j);
        if (d > hbw_) return 0.0;
        return band_[d][std::min(i, j)];
    }
    void set_entry(int i, int j, double v) { band_[std::abs(i - j)][std::min(i, j)] = v; }

    void shift_diagonal(double s) {
        for (double& v : band_[0]) v += s;
    }

    BandedSymMatrix truncate(int m) const {
        if (m > n_) throw std::domain_error("BandedSymMatrix::truncate: larger than realized size");
        BandedSymMatrix t(m, hbw_);
        for (int d = 0; d <= hbw_; ++d)
            for (int i = 0; i + d < m; ++i) t.band_[d][i] = band_[d][i];
        t.symmetry_defect_ = symmetry_defect_;
        return t;
    }

    std::vector<double> diagonal() const { return band_[0]; }
    double trace() const {
        double s = 0.0;
        for (double v : band_[0]) s += v;
        return s;
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& d : band_)
            for (double v : d) m = std::max(m, std::fabs(v));
        return m;
    }

    DenseMatrix to_dense() const {
        DenseMatrix m(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - hbw_); j <= std::min(n_ - 1, i + hbw_); ++j)
                m(i, j) = entry(i, j);
        return m;
    }

    bool tridiagonal() const { return hbw_ <= 1; }

  private:
    int n_ = 0;
    int hbw_ = 0;
    std::vector<std::vector<double>> band_;
    double symmetry_defect_ = 0.0;
};

/// Product of two symmetric banded matrices of the same realized size,
/// assuming the result is symmetric (true for powers of one matrix and for
/// polynomial combinations of commuting matrices). Band widths add.
inline BandedSymMatrix banded_sym_product(const BandedSymMatrix& A, const BandedSymMatrix& B) {
    if (A.size() != B.size()) throw std::domain_error("banded_sym_product: size mismatch");
    const int n = A.size();
    const int hl = A.half_bandwidth() + B.half_bandwidth();
    BandedSymMatrix C(n, hl);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j <= std::min(n - 1, i + hl); ++j) {
            int plo = std::max({0, i - A.half_bandwidth(), j - B.half_bandwidth()});
            int phi = std::min({n - 1, i + A.half_bandwidth(), j + B.half_bandwidth()});
            double s = 0.0;
            for (int p = plo; p <= phi; ++p) s += A.entry(i, p) * B.entry(p, j);
            C.set_entry(i, j, s);
        }
    }
    return C;
}

/// P(C) for a banded symmetric C; the half-bandwidth grows to deg(P) * L.
/// The result is the polynomial of the realized (finite) matrix: callers who
/// want sections of the infinite matrix must bring a margin of deg(P)*L rows.
inline BandedSymMatrix apply_poly_to_banded(const BandedSymMatrix& C, const Polynomial& P) {
    const int n = C.size();
    const int M = P.degree();
    BandedSymMatrix acc(n, std::max(0, M * C.half_bandwidth()));
    for (int i = 0; i < n; ++i) acc.set_entry(i, i, P[0]);
    BandedSymMatrix power = C;
    for (int l = 1; l <= M; ++l) {
        if (l > 1) power = banded_sym_product(power, C);
        if (P[l] != 0.0) {
            for (int i = 0; i < n; ++i)
                for (int j = i; j <= std::min(n - 1, i + l * C.half_bandwidth()); ++j)
                    acc.set_entry(i, j, acc.entry(i, j) + P[l] * power.entry(i, j));
        }
    }
    return acc;
}

/// trace of the l-th power of the realized banded matrix.
inline double banded_power_trace(const BandedSymMatrix& C, int l) {
    if (l == 0) return C.size();
    if (l == 1) return C.trace();
    BandedSymMatrix power = C;
    for (int j = 2; j <= l; ++j) power = banded_sym_product(power, C);
    return power.trace();
}

/// Diagonals of (C_{n x n})^l (power of the truncation) and of ((C^l)_{n x n})
/// (truncation of the power; exact for the infinite matrix when the realized
/// size carries a margin of at least l*L extra rows).
struct TruncationDiagonals {
    std::vector<double> power_of_truncation;
    std::vector<double> truncation_of_power;
};

inline TruncationDiagonals truncated_power_diagonals(const BandedSymMatrix& C, int l, int n) {
    if (C.size() < n + l * C.half_bandwidth())
        throw std::domain_error("truncated_power_diagonals: realized size too small for margin l*L");
    TruncationDiagonals out;
    BandedSymMatrix trunc = C.truncate(n);
    BandedSymMatrix pt = trunc;
    for (int j = 2; j <= l; ++j) pt = banded_sym_product(pt, trunc);
    out.power_of_truncation = l == 0 ? std::vector<double>(n, 1.0) : pt.diagonal();

    BandedSymMatrix pf = C;
    for (int j = 2; j <= l; ++j) pf = banded_sym_product(pf, C);
    auto d = pf.diagonal();
    d.resize(n);
    out.truncation_of_power = l == 0 ? std::vector<double>(n, 1.0) : d;
    return out;
}

/// (1/n) |Tr(P(C_{n x n})) - Tr((P(C))_{n x n})|, the banded-trace gap.
/// Requires realized size >= n + deg(P) * L.
inline double truncation_trace_gap(const BandedSymMatrix& C, const Polynomial& P, int n) {
    if (C.size() < n + P.degree() * C.half_bandwidth())
        throw std::domain_error("truncation_trace_gap: realized size too small, need n + deg(P)*L");
    BandedSymMatrix pc_trunc = apply_poly_to_banded(C.truncate(n), P);
    double tr1 = pc_trunc.trace();
    BandedSymMatrix pc_full = apply_poly_to_banded(C, P);
    double tr2 = 0.0;
    auto diag = pc_full.diagonal();
    for (int i = 0; i < n; ++i) tr2 += diag[i];
    return std::fabs(tr1 - tr2) / n;
}

}  // namespace exjacobi

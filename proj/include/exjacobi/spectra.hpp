#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <vector>

#include "exjacobi/banded.hpp"
#include "exjacobi/csv.hpp"
#include "exjacobi/darboux.hpp"
#include "exjacobi/eigensolver.hpp"
#include "exjacobi/opmatrix.hpp"

namespace exjacobi {

/// All n eigenvalues of the n x n truncation, ascending. Tridiagonal input
/// goes straight to QL; wider bands are reduced by Householder first.
inline std::vector<double> sym_eigenvalues(const BandedSymMatrix& mat, int n) {
    if (n > mat.size()) throw std::domain_error("sym_eigenvalues: n exceeds realized size");
    BandedSymMatrix t = mat.truncate(n);
    if (t.tridiagonal()) {
        std::vector<double> d(n), e(std::max(0, n - 1));
        for (int i = 0; i < n; ++i) d[i] = t.entry(i, i);
        for (int i = 0; i + 1 < n; ++i) e[i] = t.entry(i, i + 1);
        return tridiag_eigenvalues(std::move(d), e);
    }
    return sym_eigenvalues_dense(t.to_dense().a, n);
}

/// Finite point set with uniform weights 1/n.
struct EmpiricalMeasure {
    std::vector<double> points;  // sorted ascending

    explicit EmpiricalMeasure(std::vector<double> pts = {}) : points(std::move(pts)) {
        std::sort(points.begin(), points.end());
    }
    int size() const { return static_cast<int>(points.size()); }
    double moment(int l) const {
        double s = 0.0;
        for (double p : points) s += std::pow(p, l);
        return s / points.size();
    }
    int count_in(double lo, double hi) const {
        int c = 0;
        for (double p : points)
            if (p >= lo && p <= hi) ++c;
        return c;
    }
};

/// Zeros z_i of the modified average characteristic polynomial
/// det(zI - M_{e,n x n}) together with the in-range preimages y_i = Q^{-1}(z_i);
/// eigenvalues outside Q([-1,1]) are reported separately.
struct AvgCharZeros {
    EmpiricalMeasure z;                // all n eigenvalues
    std::vector<double> y_in_range;    // preimages of in-range z_i, in [-1,1]
    std::vector<double> z_out_of_range;
};

inline AvgCharZeros avg_char_poly_zeros(const ExceptionalFamily& fam, int n,
                                        QConstantMode mode = QConstantMode::Zero) {
    BandedSymMatrix me = build_Me(fam, n, mode);
    std::vector<double> ev = sym_eigenvalues(me, n);
    Polynomial Q = q_primitive(fam, mode);
    AvgCharZeros out;
    out.z = EmpiricalMeasure(ev);
    const double qlo = Q(-1.0), qhi = Q(1.0);
    for (double zv : ev) {
        if (zv >= qlo && zv <= qhi)
            out.y_in_range.push_back(q_inverse_on_interval(Q, zv));
        else
            out.z_out_of_range.push_back(zv);
    }
    std::sort(out.y_in_range.begin(), out.y_in_range.end());
    return out;
}

/// mu_n density evaluator: x -> (1/n) K_n(x,x) W(x); total mass 1.
struct ChristoffelMeasure {
    const ExceptionalFamily* fam;
    int n;

    double density(double x) const {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            double v = fam->orthonormal(k, x);
            s += v * v;
        }
        return s / n * fam->weight(x);
    }
};

inline bool christoffel_hypothesis_ok(const ExceptionalFamily& fam) {
    JacobiParams wp = fam.weight_params();
    return wp.alpha >= -0.5 && wp.beta >= -0.5;
}

/// Moments int Q^l dmu_n for l = 0..l_max (index l); l = 0 is the total mass.
inline std::vector<double> christoffel_moments(const ExceptionalFamily& fam, int n, int l_max,
                                               QConstantMode mode = QConstantMode::Zero) {
    Polynomial Q = q_primitive(fam, mode);
    int degree_bound = 2 * (n + std::max(fam.b.degree(), 1)) + Q.degree() * l_max;
    int nq = detail::next_pow2_at_least(degree_bound / 2 + 16);
    std::vector<double> prev;
    for (; nq <= (1 << 16); nq *= 2) {
        FamilyQuadrature fq = make_family_quadrature(fam, nq);
        auto tab = orthonormal_values_table(fam, n - 1, fq.nodes);
        std::vector<double> dens(fq.nodes.size(), 0.0);
        for (int k = 0; k < n; ++k)
            for (std::size_t i = 0; i < fq.nodes.size(); ++i) dens[i] += tab[k][i] * tab[k][i];
        std::vector<double> mom(l_max + 1, 0.0);
        for (std::size_t i = 0; i < fq.nodes.size(); ++i) {
            double base = fq.weights[i] * dens[i] / n;
            double qp = 1.0;
            mom[0] += base;
            for (int l = 1; l <= l_max; ++l) {
                qp *= Q(fq.nodes[i]);
                mom[l] += base * qp;
            }
        }
        if (!prev.empty()) {
            double diff = 0.0;
            for (int l = 0; l <= l_max; ++l) diff = std::max(diff, std::fabs(mom[l] - prev[l]));
            if (diff <= 1e-11) return mom;
        }
        prev = std::move(mom);
    }
    throw NumericalError("christoffel_moments: quadrature did not stabilize");
}

/// Moments int P^l dmu_e of the arcsine (equilibrium) measure, l = 0..l_max,
/// by Chebyshev-Gauss quadrature (exact for polynomials).
inline std::vector<double> equilibrium_moments(const Polynomial& P, int l_max) {
    std::vector<double> mom(l_max + 1, 0.0);
    int nq = std::max(8, P.degree() * l_max / 2 + 4);
    for (int l = 0; l <= l_max; ++l)
        mom[l] = equilibrium_integrate([&](double x) { return std::pow(P(x), l); }, nq);
    return mom;
}

/// Trace-gap experiment: (1/n) |Tr((Q(A_{n x n}))^l) - Tr((M_{e,n x n})^l)|.
/// Builds the standard recurrence and the exceptional matrix once at n_max
/// and evaluates gaps for any n <= n_max via banded power traces.
class TraceGapExperiment {
  public:
    TraceGapExperiment(const ExceptionalFamily& fam, int n_max,
                       QConstantMode mode = QConstantMode::Zero)
        : Q_(q_primitive(fam, mode)) {
        sr_ = standard_recurrence(fam, n_max + 1);
        me_table_ = recurrence_coeffs(fam, n_max, mode);
    }

    double gap(int l, int n) const {
        if (n > me_table_.N) throw std::domain_error("trace_gap: n exceeds prepared size");
        BandedSymMatrix A = sr_.matrix(n);
        BandedSymMatrix QA = apply_poly_to_banded(A, Q_);
        double t1 = banded_power_trace(QA, l);
        BandedSymMatrix Me = BandedSymMatrix::from_entries(
            n, me_table_.L, [&](int i, int j) { return me_table_.at(i, j - i); });
        double t2 = banded_power_trace(Me, l);
        return std::fabs(t1 - t2) / n;
    }

    const StandardRecurrence& standard() const { return sr_; }
    const RecurrenceTable& table() const { return me_table_; }
    const Polynomial& Q() const { return Q_; }

  private:
    Polynomial Q_;
    StandardRecurrence sr_;
    RecurrenceTable me_table_;
};

inline double trace_gap_experiment(const ExceptionalFamily& fam, int l, int n,
                                   QConstantMode mode = QConstantMode::Zero) {
    return TraceGapExperiment(fam, n, mode).gap(l, n);
}

/// --- determinantal oracle -------------------------------------------------

/// E prod_i (z - Q(x_i)) under the N-point determinantal density
/// rho_N = c(N) det[K_N(x_i,x_j)] prod W(x_i), by tensor-product quadrature
/// (64 Gauss-Jacobi nodes per axis). c(N) is fixed numerically from
/// int rho_N = 1; the deviation of the kernel mass from N! is reported.
struct DeterminantalResult {
    std::complex<double> value;
    double kernel_mass = 0.0;        // int det[K_N] prod W
    double c_deviation = 0.0;        // kernel_mass / N! - 1
};

inline DeterminantalResult determinantal_oracle(const ExceptionalFamily& fam, int N,
                                                std::complex<double> z,
                                                QConstantMode mode = QConstantMode::Zero,
                                                int nodes_per_axis = 64) {
    if (N < 1 || N > 3) throw std::domain_error("determinantal_oracle: N must be 1, 2 or 3");
    Polynomial Q = q_primitive(fam, mode);
    FamilyQuadrature fq = make_family_quadrature(fam, nodes_per_axis);
    const int M = static_cast<int>(fq.nodes.size());
    auto tab = orthonormal_values_table(fam, N - 1, fq.nodes);
    std::vector<double> qv(M);
    for (int i = 0; i < M; ++i) qv[i] = Q(fq.nodes[i]);

    auto kernel = [&](int i, int j) {
        double s = 0.0;
        for (int k = 0; k < N; ++k) s += tab[k][i] * tab[k][j];
        return s;
    };

    DeterminantalResult out;
    std::complex<double> acc(0.0, 0.0);
    double mass = 0.0;
    if (N == 1) {
        for (int i = 0; i < M; ++i) {
            double d = kernel(i, i) * fq.weights[i];
            mass += d;
            acc += d * (z - qv[i]);
        }
    } else if (N == 2) {
        for (int i = 0; i < M; ++i) {
            double kii = kernel(i, i);
            for (int j = 0; j < M; ++j) {
                double kij = kernel(i, j);
                double det = kii * kernel(j, j) - kij * kij;
                double d = det * fq.weights[i] * fq.weights[j];
                mass += d;
                acc += d * (z - qv[i]) * (z - qv[j]);
            }
        }
    } else {
        std::vector<double> kd(M);
        for (int i = 0; i < M; ++i) kd[i] = kernel(i, i);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) {
                double kij = kernel(i, j);
                for (int k = 0; k < M; ++k) {
                    double kik = kernel(i, k), kjk = kernel(j, k);
                    double det = kd[i] * (kd[j] * kd[k] - kjk * kjk) - kij * (kij * kd[k] - kjk * kik) +
                                 kik * (kij * kjk - kd[j] * kik);
                    double d = det * fq.weights[i] * fq.weights[j] * fq.weights[k];
                    mass += d;
                    acc += d * (z - qv[i]) * (z - qv[j]) * (z - qv[k]);
                }
            }
    }
    double fact = 1.0;
    for (int k = 2; k <= N; ++k) fact *= k;
    out.kernel_mass = mass;
    out.c_deviation = mass / fact - 1.0;
    out.value = acc / mass;
    return out;
}

/// Characteristic polynomial det(zI - M) of a small symmetric matrix, exact
/// cofactor expansion (N <= 3); oracle counterpart of the eigen route.
inline std::complex<double> char_poly_det(const BandedSymMatrix& M, int N, std::complex<double> z) {
    if (N == 1) return z - M.entry(0, 0);
    if (N == 2)
        return (z - M.entry(0, 0)) * (z - M.entry(1, 1)) - M.entry(0, 1) * M.entry(1, 0);
    if (N == 3) {
        std::complex<double> a = z - M.entry(0, 0), b = -M.entry(0, 1), c = -M.entry(0, 2);
        std::complex<double> d = -M.entry(1, 0), e = z - M.entry(1, 1), f = -M.entry(1, 2);
        std::complex<double> g = -M.entry(2, 0), h = -M.entry(2, 1), i = z - M.entry(2, 2);
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    }
    throw std::domain_error("char_poly_det: N must be 1, 2 or 3");
}

/// --- discrepancy ------------------------------------------------------------

inline std::vector<double> angles_from_points(const std::vector<double>& xs) {
    std::vector<double> ang(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ang[i] = std::acos(std::clamp(xs[i], -1.0, 1.0));
    std::sort(ang.begin(), ang.end());
    return ang;
}

/// |#{i : gamma <= eta_i <= delta} - ((delta-gamma)/pi) n| / n.
inline double interval_discrepancy(const std::vector<double>& angles, double gamma, double delta) {
    int c = 0;
    for (double e : angles)
        if (e >= gamma && e <= delta) ++c;
    double n = static_cast<double>(angles.size());
    return std::fabs(c - (delta - gamma) / std::numbers::pi * n) / n;
}

/// Exact sup over all subintervals of [0,pi] of the interval discrepancy:
/// max(F - G) - min(F - G) over the jump points of the empirical CDF.
inline double sup_discrepancy(std::vector<double> angles) {
    std::sort(angles.begin(), angles.end());
    const double n = static_cast<double>(angles.size());
    double hi = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double g = angles[i] / std::numbers::pi;
        hi = std::max(hi, (i + 1.0) / n - g);
        lo = std::min(lo, i / n - g);
    }
    return hi - lo;
}

inline double interval_discrepancy(const EmpiricalMeasure& m, double gamma, double delta) {
    return interval_discrepancy(m.points, gamma, delta);
}
inline double sup_discrepancy(const EmpiricalMeasure& m) { return sup_discrepancy(m.points); }

/// --- CSV exports ------------------------------------------------------------

inline void write_moments_csv(std::ostream& os, const std::vector<int>& n_list, int l_max,
                              const std::vector<std::vector<double>>& mu_moments,
                              const std::vector<double>& eq_moments) {
    csv_row(os, "n", "l", "mu_n_moment", "equilibrium_moment", "gap");
    for (std::size_t i = 0; i < n_list.size(); ++i)
        for (int l = 1; l <= l_max; ++l)
            csv_row(os, n_list[i], l, mu_moments[i][l], eq_moments[l],
                    std::fabs(mu_moments[i][l] - eq_moments[l]));
}

inline void write_trace_csv(std::ostream& os,
                            const std::vector<std::tuple<int, int, double>>& rows) {
    csv_row(os, "n", "l", "trace_gap");
    for (const auto& [n, l, g] : rows) csv_row(os, n, l, g);
}

inline void write_discrepancy_csv(std::ostream& os,
                                  const std::vector<std::tuple<int, double, double>>& rows) {
    csv_row(os, "n", "sup_discrepancy", "bound");
    for (const auto& [n, v, b] : rows) csv_row(os, n, v, b);
}

}  // namespace exjacobi

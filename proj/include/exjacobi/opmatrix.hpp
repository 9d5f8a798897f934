#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "exjacobi/banded.hpp"
#include "exjacobi/csv.hpp"
#include "exjacobi/darboux.hpp"
#include "exjacobi/errors.hpp"
#include "exjacobi/quadrature.hpp"

namespace exjacobi {

enum class QConstantMode { Zero, MinusU0 };

/// U_|j| limit coefficients from the coefficients d_k of b_tilde:
/// closed-form binomial sums, equivalently the Chebyshev-cosine coefficients
/// of Q0(cos theta) = U_0 + sum_j 2 U_j cos(j theta). Returns U_0..U_L.
inline std::vector<double> limit_coeffs(const ExceptionalFamily& fam) {
    const Polynomial& bt = fam.b_tilde;
    const int L = fam.L;
    auto d = [&](int k) { return k <= bt.degree() ? bt[k] : 0.0; };
    auto binom = [](int n, int k) {
        if (k < 0 || k > n) return 0.0;
        double r = 1.0;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    std::vector<double> U(L + 1, 0.0);
    for (int j = 0; j <= L; ++j) {
        double s = 0.0;
        if (j % 2 == 0) {
            int l = j / 2;
            for (int p = std::max(l, 1); p <= L / 2; ++p)
                s += d(2 * p - 1) / (2.0 * p) * binom(2 * p, p - l) / std::pow(2.0, 2 * p);
        } else {
            int l = (j - 1) / 2;
            for (int p = l; p <= (L - 1) / 2; ++p)
                s += d(2 * p) / (2.0 * p + 1.0) * binom(2 * p + 1, p - l) / std::pow(2.0, 2 * p + 1);
        }
        U[j] = s;
    }
    return U;
}

/// Q = int^x b_tilde, zero constant term, optionally shifted by -U_0.
/// Degree L and strictly increasing on [-1,1] since Q' = b_tilde > 0.
inline Polynomial q_primitive(const ExceptionalFamily& fam, QConstantMode mode = QConstantMode::Zero) {
    Polynomial q0 = fam.b_tilde.antiderivative(0.0);
    if (mode == QConstantMode::MinusU0) q0 -= Polynomial::constant(limit_coeffs(fam)[0]);
    return q0;
}

/// Unique preimage of z under Q on [-1,1] (Q is increasing there):
/// 80 bisection steps followed by a short Newton polish.
inline double q_inverse_on_interval(const Polynomial& Q, double z) {
    double lo = -1.0, hi = 1.0;
    if (z <= Q(lo)) return lo;
    if (z >= Q(hi)) return hi;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (Q(mid) < z)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    Polynomial dQ = Q.derivative();
    for (int it = 0; it < 5; ++it) {
        double d = dQ(x);
        if (d == 0.0) break;
        x -= (Q(x) - z) / d;
        x = std::clamp(x, -1.0, 1.0);
    }
    return x;
}

/// Gauss rule for the measure W dx = w^{(alpha+eps1,beta+eps2)} / b_tilde^2 dx:
/// Gauss-Jacobi nodes with 1/b_tilde^2 folded into the weights.
struct FamilyQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;  // already include the 1/b_tilde^2 factor
};

inline FamilyQuadrature make_family_quadrature(const ExceptionalFamily& fam, int n_nodes) {
    QuadratureRule rule = gauss_jacobi_rule(n_nodes, fam.weight_params());
    FamilyQuadrature q;
    q.nodes = rule.nodes;
    q.weights.resize(rule.weights.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double bt = fam.b_tilde(rule.nodes[i]);
        q.weights[i] = rule.weights[i] / (bt * bt);
    }
    return q;
}

/// Recurrence table u_{n,k} = <Q \hat P_n, \hat P_{n+k}>_W, rows n = 0..N-1,
/// k = -L..L (zero when n+k < 0).
struct RecurrenceTable {
    int N = 0;
    int L = 0;
    std::vector<double> u;  // row-major, (2L+1) per row

    double at(int n, int k) const {
        if (n < 0 || n >= N || k < -L || k > L) return 0.0;
        return u[static_cast<std::size_t>(n) * (2 * L + 1) + (k + L)];
    }
    double& slot(int n, int k) { return u[static_cast<std::size_t>(n) * (2 * L + 1) + (k + L)]; }
};

namespace detail {

inline int next_pow2_at_least(int v) {
    int n = 64;
    while (n < v) n *= 2;
    return n;
}

inline RecurrenceTable recurrence_coeffs_fixed(const ExceptionalFamily& fam, int N, int n_nodes,
                                               const Polynomial& Q) {
    const int L = fam.L;
    FamilyQuadrature fq = make_family_quadrature(fam, n_nodes);
    auto tab = orthonormal_values_table(fam, N - 1 + L, fq.nodes);
    std::vector<double> qw(fq.nodes.size());
    for (std::size_t i = 0; i < fq.nodes.size(); ++i) qw[i] = fq.weights[i] * Q(fq.nodes[i]);
    RecurrenceTable t;
    t.N = N;
    t.L = L;
    t.u.assign(static_cast<std::size_t>(N) * (2 * L + 1), 0.0);
    for (int n = 0; n < N; ++n)
        for (int k = -L; k <= L; ++k) {
            if (n + k < 0) continue;
            double s = 0.0;
            const auto& pn = tab[n];
            const auto& pk = tab[n + k];
            for (std::size_t i = 0; i < qw.size(); ++i) s += qw[i] * pn[i] * pk[i];
            t.slot(n, k) = s;
        }
    return t;
}

}  // namespace detail

/// Adaptive version: doubles the node count until the whole table is stable
/// to 1e-12 (absolute, entries are O(1)).
inline RecurrenceTable recurrence_coeffs(const ExceptionalFamily& fam, int N,
                                         QConstantMode mode = QConstantMode::Zero) {
    if (N < 1) throw std::domain_error("recurrence_coeffs: N >= 1 required");
    Polynomial Q = q_primitive(fam, mode);
    int degree_bound = Q.degree() + 2 * (N + fam.L + std::max(fam.b.degree(), 1));
    int n0 = detail::next_pow2_at_least(degree_bound / 2 + 16);
    RecurrenceTable prev = detail::recurrence_coeffs_fixed(fam, N, n0, Q);
    for (int nq = 2 * n0; nq <= (1 << 16); nq *= 2) {
        RecurrenceTable cur = detail::recurrence_coeffs_fixed(fam, N, nq, Q);
        double diff = 0.0;
        for (std::size_t i = 0; i < cur.u.size(); ++i) diff = std::max(diff, std::fabs(cur.u[i] - prev.u[i]));
        if (diff <= 1e-12) return cur;
        prev = std::move(cur);
    }
    throw NumericalError("recurrence_coeffs: quadrature did not stabilize");
}

/// Truncated multiplication matrix M_e (2L+1 diagonals, symmetric).
inline BandedSymMatrix build_Me(const ExceptionalFamily& fam, int N,
                                QConstantMode mode = QConstantMode::Zero) {
    RecurrenceTable t = recurrence_coeffs(fam, N, mode);
    return BandedSymMatrix::from_entries(N, t.L, [&](int i, int j) { return t.at(i, j - i); });
}

/// Three-term recurrence x q_n = a_{n+1} q_{n+1} + b_n q_n + a_n q_{n-1} of the
/// standard orthonormal polynomials for the weight W, from the discretized
/// Stieltjes procedure.
struct StandardRecurrence {
    std::vector<double> a;  // a[0] = 0, a[1..N]
    std::vector<double> b;  // b[0..N-1] and one spare
    double mass = 0.0;      // ||1||_W^2

    /// q_0..q_K at x.
    void orthonormal_all(int K, double x, std::vector<double>& out) const {
        out.resize(K + 1);
        double qm1 = 0.0, q0 = 1.0 / std::sqrt(mass);
        out[0] = q0;
        for (int k = 0; k < K; ++k) {
            double q1 = ((x - b[k]) * q0 - (k > 0 ? a[k] : 0.0) * qm1) / a[k + 1];
            qm1 = q0;
            q0 = q1;
            out[k + 1] = q0;
        }
    }

    BandedSymMatrix matrix(int n) const {
        BandedSymMatrix A(n, 1);
        for (int i = 0; i < n; ++i) {
            A.set_entry(i, i, b[i]);
            if (i + 1 < n) A.set_entry(i, i + 1, a[i + 1]);
        }
        return A;
    }
};

namespace detail {

inline StandardRecurrence stieltjes_fixed(const ExceptionalFamily& fam, int N, int n_nodes) {
    FamilyQuadrature fq = make_family_quadrature(fam, n_nodes);
    const std::size_t M = fq.nodes.size();
    StandardRecurrence sr;
    sr.a.assign(N + 2, 0.0);
    sr.b.assign(N + 2, 0.0);
    std::vector<double> pm1(M, 0.0), p0(M, 1.0);
    double norm_prev = 0.0;
    for (int k = 0; k <= N + 1; ++k) {
        double norm = 0.0, xmom = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            double t = fq.weights[i] * p0[i] * p0[i];
            norm += t;
            xmom += t * fq.nodes[i];
        }
        if (!(norm > 0.0))
            throw NumericalError("standard_recurrence: loss of positivity (discretization too coarse)");
        if (k == 0) sr.mass = norm;
        sr.b[k] = xmom / norm;
        double beta = 0.0;
        if (k > 0) {
            beta = norm / norm_prev;
            sr.a[k] = std::sqrt(beta);
        }
        norm_prev = norm;
        for (std::size_t i = 0; i < M; ++i) {
            double p1 = (fq.nodes[i] - sr.b[k]) * p0[i] - beta * pm1[i];
            pm1[i] = p0[i];
            p0[i] = p1;
        }
        // monic values decay like 2^-k; rescale both carried vectors before
        // the norms reach the denormal floor (the a, b ratios are unaffected)
        if (norm_prev < 0x1p-400) {
            const double s = 0x1p+400;
            for (std::size_t i = 0; i < M; ++i) {
                pm1[i] *= s;
                p0[i] *= s;
            }
            norm_prev *= s * s;
        }
    }
    sr.a.resize(N + 1);
    sr.b.resize(N + 1);
    return sr;
}

}  // namespace detail

inline StandardRecurrence standard_recurrence(const ExceptionalFamily& fam, int N) {
    if (N < 1) throw std::domain_error("standard_recurrence: N >= 1 required");
    int n0 = detail::next_pow2_at_least(2 * N + 64);
    StandardRecurrence prev = detail::stieltjes_fixed(fam, N, n0);
    for (int nq = 2 * n0; nq <= (1 << 17); nq *= 2) {
        StandardRecurrence cur = detail::stieltjes_fixed(fam, N, nq);
        double diff = 0.0;
        for (int k = 0; k <= N; ++k)
            diff = std::max({diff, std::fabs(cur.a[k] - prev.a[k]), std::fabs(cur.b[k] - prev.b[k])});
        if (diff <= 1e-10) return cur;
        prev = std::move(cur);
    }
    throw NumericalError("standard_recurrence: quadrature did not stabilize");
}

/// Basis-change matrix o_{ij} = <\hat P_j, q_i>_W, i, j = 0..N-1. Columns have
/// unit norm; o_{ij} = 0 for i > j + deg(b) - 1 (structurally, \hat P_j is a
/// polynomial of that degree).
inline DenseMatrix basis_change(const ExceptionalFamily& fam, int N,
                                const StandardRecurrence* sr_in = nullptr) {
    StandardRecurrence local;
    if (!sr_in) {
        local = standard_recurrence(fam, N + 1);
        sr_in = &local;
    }
    int degree_bound = 2 * (N + std::max(fam.b.degree(), 1));
    int nq = detail::next_pow2_at_least(degree_bound / 2 + 16) * 2;
    FamilyQuadrature fq = make_family_quadrature(fam, nq);
    auto ptab = orthonormal_values_table(fam, N - 1, fq.nodes);
    std::vector<std::vector<double>> qtab(N, std::vector<double>(fq.nodes.size()));
    std::vector<double> qv;
    for (std::size_t i = 0; i < fq.nodes.size(); ++i) {
        sr_in->orthonormal_all(N - 1, fq.nodes[i], qv);
        for (int k = 0; k < N; ++k) qtab[k][i] = qv[k];
    }
    DenseMatrix O(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < fq.nodes.size(); ++t) s += fq.weights[t] * qtab[i][t] * ptab[j][t];
            O(i, j) = s;
        }
    return O;
}

/// CSV export: n, k, u_nk, U_limit, abs_gap.
inline void write_recurrence_csv(std::ostream& os, const RecurrenceTable& t,
                                 const std::vector<double>& U) {
    csv_row(os, "n", "k", "u_nk", "U_limit", "abs_gap");
    for (int n = 0; n < t.N; ++n)
        for (int k = -t.L; k <= t.L; ++k) {
            double lim = U[std::abs(k)];
            csv_row(os, n, k, t.at(n, k), lim, std::fabs(t.at(n, k) - lim));
        }
}

}  // namespace exjacobi

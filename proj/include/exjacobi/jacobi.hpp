#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "exjacobi/polynomial.hpp"

namespace exjacobi {

/// Classical Jacobi parameter pair. alpha, beta > -1 is the orthogonal
/// regime; other values are allowed only where explicitly noted (seed
/// polynomials use reflected parameters).
struct JacobiParams {
    double alpha = 0.0;
    double beta = 0.0;

    bool orthogonal_regime() const { return alpha > -1.0 && beta > -1.0; }
    JacobiParams shifted(double da, double db) const { return {alpha + da, beta + db}; }
};

inline void require_orthogonal(const JacobiParams& p, const char* who) {
    if (!p.orthogonal_regime())
        throw std::domain_error(std::string(who) + ": requires alpha, beta > -1");
}

/// rho_k^2 = 2^{a+b+1} Gamma(k+a+1) Gamma(k+b+1) / ((2k+a+b+1) k! Gamma(k+a+b+1)).
/// For k = 0 the last two factors are combined into Gamma(a+b+2), which keeps
/// the formula finite for a+b+1 < 0.
inline double jacobi_norm_sq(int k, const JacobiParams& p) {
    require_orthogonal(p, "jacobi_norm");
    const double a = p.alpha, b = p.beta;
    double lg = (a + b + 1.0) * std::log(2.0) + std::lgamma(k + a + 1.0) + std::lgamma(k + b + 1.0) -
                std::lgamma(k + 1.0);
    if (k == 0)
        lg -= std::lgamma(a + b + 2.0);
    else
        lg -= std::log(2.0 * k + a + b + 1.0) + std::lgamma(k + a + b + 1.0);
    return std::exp(lg);
}

inline double jacobi_norm(int k, const JacobiParams& p) { return std::sqrt(jacobi_norm_sq(k, p)); }

/// Classical (unnormalized) P_n^{(a,b)}(x) by the three-term recurrence in n.
/// Valid for all n when a+b > -2 (the denominators are then positive for
/// n >= 2); callers with reflected seed parameters should go through
/// jacobi_polynomial instead.
template <class T>
T jacobi_eval(int n, const JacobiParams& prm, T x) {
    const double a = prm.alpha, b = prm.beta;
    if (n == 0) return T(1.0);
    T pm1 = T(1.0);
    T p0 = T(0.5 * (a - b)) + T(0.5 * (a + b + 2.0)) * x;
    for (int k = 2; k <= n; ++k) {
        const double c1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
        const double c2 = (2.0 * k + a + b - 1.0) * (a * a - b * b);
        const double c3 = (2.0 * k + a + b - 1.0) * (2.0 * k + a + b) * (2.0 * k + a + b - 2.0);
        const double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b);
        T p1 = ((T(c2) + T(c3) * x) * p0 - T(c4) * pm1) / T(c1);
        pm1 = p0;
        p0 = p1;
    }
    return p0;
}

/// Monomial coefficients of P_n^{(a,b)} through the two-binomial expansion
///   P_n = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^{n-s},
/// a polynomial identity in a and b, so reflected (negative) parameters are
/// fine. Degree degeneration (vanishing leading coefficient) is reported via
/// *degenerate when requested.
inline Polynomial jacobi_polynomial(int n, const JacobiParams& prm, bool* degenerate = nullptr) {
    const double a = prm.alpha, b = prm.beta;
    auto binom_prod = [](double top_offset, int count) {
        // C(m + t, count) as prod_{i=1..count} (t + i) / i with t = top_offset
        double r = 1.0;
        for (int i = 1; i <= count; ++i) r *= (top_offset + i) / i;
        return r;
    };
    Polynomial xm1_half{-0.5, 0.5};  // (x-1)/2
    Polynomial xp1_half{0.5, 0.5};   // (x+1)/2
    std::vector<Polynomial> pow_m(n + 1), pow_p(n + 1);
    pow_m[0] = Polynomial::constant(1.0);
    pow_p[0] = Polynomial::constant(1.0);
    for (int i = 1; i <= n; ++i) {
        pow_m[i] = pow_m[i - 1] * xm1_half;
        pow_p[i] = pow_p[i - 1] * xp1_half;
    }
    Polynomial out;
    for (int s = 0; s <= n; ++s) {
        double c = binom_prod(a + s, n - s) * binom_prod(b + n - s, s);
        out += c * (pow_m[s] * pow_p[n - s]);
    }
    if (degenerate) *degenerate = out.degree() < n || std::fabs(out.leading()) <= 1e-12 * out.max_abs_coeff();
    return out;
}

/// Monic three-term recurrence coefficients for the Jacobi weight
/// (Gautschi's r_jacobi): pi_{k+1} = (x - alpha_k) pi_k - beta_k pi_{k-1},
/// beta_0 = total mass.
struct MonicRecurrence {
    std::vector<double> alpha;  // alpha_0 .. alpha_{K}
    std::vector<double> beta;   // beta_0 (mass), beta_1 .. beta_K
};

inline MonicRecurrence jacobi_monic_recurrence(int K, const JacobiParams& p) {
    require_orthogonal(p, "jacobi_monic_recurrence");
    const double a = p.alpha, b = p.beta;
    MonicRecurrence r;
    r.alpha.resize(K + 1);
    r.beta.resize(K + 1);
    r.beta[0] = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                         std::lgamma(a + b + 2.0));
    r.alpha[0] = (b - a) / (a + b + 2.0);
    for (int k = 1; k <= K; ++k) {
        const double s = 2.0 * k + a + b;
        r.alpha[k] = (b * b - a * a) / (s * (s + 2.0));
        if (k == 1)
            r.beta[k] = 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
        else
            r.beta[k] = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    return r;
}

/// Values of the orthonormal p_0..p_K at x (recurrence in n; stable).
template <class T>
void jacobi_orthonormal_all(int K, const JacobiParams& prm, T x, std::vector<T>& out,
                            const MonicRecurrence* rec = nullptr) {
    MonicRecurrence local;
    if (!rec) {
        local = jacobi_monic_recurrence(K + 1, prm);
        rec = &local;
    }
    out.resize(K + 1);
    std::vector<double> aoff(K + 2);
    for (int k = 0; k <= K + 1 && k < static_cast<int>(rec->beta.size()); ++k)
        aoff[k] = std::sqrt(rec->beta[k]);
    T pm1 = T(0.0);
    T p0 = T(1.0 / aoff[0]);
    out[0] = p0;
    for (int k = 0; k < K; ++k) {
        T p1 = ((x - T(rec->alpha[k])) * p0 - T(k > 0 ? aoff[k] : 0.0) * pm1) / T(aoff[k + 1]);
        pm1 = p0;
        p0 = p1;
        out[k + 1] = p0;
    }
}

template <class T>
T jacobi_orthonormal_eval(int n, const JacobiParams& prm, T x) {
    std::vector<T> v;
    jacobi_orthonormal_all(n, prm, x, v);
    return v[n];
}

/// Derivative identity p_n' = factor * p_{n-1}^{(a+1,b+1)}; n = 0 gives the
/// zero polynomial, signaled by is_zero.
struct OrthonormalDerivative {
    bool is_zero = false;
    double factor = 0.0;
    JacobiParams shifted;
};

inline OrthonormalDerivative jacobi_derivative_as_jacobi(int n, const JacobiParams& p) {
    OrthonormalDerivative d;
    d.shifted = p.shifted(1.0, 1.0);
    if (n == 0) {
        d.is_zero = true;
        return d;
    }
    d.factor = 0.5 * (n + p.alpha + p.beta + 1.0) * jacobi_norm(n - 1, d.shifted) / jacobi_norm(n, p);
    return d;
}

/// j-th derivative of the orthonormal p_n as (factor, degree n-j, params
/// shifted by j); factor = 0 when j > n.
inline double jacobi_orthonormal_derivative_factor(int n, const JacobiParams& p, int order) {
    double f = 1.0;
    JacobiParams cur = p;
    int deg = n;
    for (int j = 0; j < order; ++j) {
        if (deg == 0) return 0.0;
        auto d = jacobi_derivative_as_jacobi(deg, cur);
        f *= d.factor;
        cur = d.shifted;
        --deg;
    }
    return f;
}

template <class T>
T jacobi_orthonormal_derivative(int n, const JacobiParams& prm, T x, int order) {
    if (order > n) return T(0.0);
    double f = jacobi_orthonormal_derivative_factor(n, prm, order);
    JacobiParams shifted = prm.shifted(order, order);
    return T(f) * jacobi_orthonormal_eval(n - order, shifted, x);
}

/// Classical derivative (P_n^{(a,b)})' = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}.
template <class T>
T jacobi_classical_derivative(int n, const JacobiParams& prm, T x) {
    if (n == 0) return T(0.0);
    return T(0.5 * (n + prm.alpha + prm.beta + 1.0)) * jacobi_eval(n - 1, prm.shifted(1.0, 1.0), x);
}

}  // namespace exjacobi

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "exjacobi/errors.hpp"
#include "exjacobi/jacobi.hpp"
#include "exjacobi/polynomial.hpp"
#include "exjacobi/quadrature.hpp"
#include "exjacobi/roots.hpp"

namespace exjacobi {

/// The three admissible quasi-rational seeds:
///   TypeI  : b0 = (1-x)   P_m^{(-a, b)}
///   TypeII : b0 = (1+x)   P_m^{( a,-b)}
///   TypeIII: b0 = (1-x^2) P_m^{(-a,-b)}
enum class SeedKind { TypeI, TypeII, TypeIII };

struct SeedChoice {
    SeedKind kind = SeedKind::TypeI;
    int m = 1;                       // seed degree, >= 1
    Polynomial s = Polynomial{1.0};  // extra zero-free factor, default 1
};

inline const char* seed_kind_name(SeedKind k) {
    switch (k) {
        case SeedKind::TypeI: return "I";
        case SeedKind::TypeII: return "II";
        default: return "III";
    }
}

/// A validated one-step family. All data is immutable after build_family;
/// the evaluators are pure, so concurrent use is safe.
///
/// Two flavors share this type: genuine Darboux families, and the
/// codimension-zero "classical" wrapper used as a degenerate reference in
/// tests (b_tilde constant, P_n^{[1]} = p_n, Q = c x).
class ExceptionalFamily {
  public:
    bool classical = false;
    JacobiParams params;  // base (alpha, beta); for classical: the weight pair itself
    SeedChoice seed;

    Polynomial b, bw, b_tilde;
    Polynomial b_prime, b_second, bw_prime, bw_second;
    int eps1 = 0, eps2 = 0;  // each +-1 for Darboux, 0 for classical
    double lambda_tilde = 0.0;
    double lambda_tilde_closed_form = 0.0;
    int L = 1;      // half-bandwidth of the multiplication matrix, deg(b_tilde)+1
    int codim = 0;  // deg(b_tilde)

    // residual diagnostics recorded at build time
    double riccati_residual = 0.0;
    double bw_residual = 0.0;

    JacobiParams weight_params() const {
        if (classical) return params;
        return params.shifted(eps1, eps2);
    }

    /// Eigenvalue of the base Jacobi operator: T p_n = lambda_n p_n.
    double lambda_n(int n) const { return -double(n) * (n + params.alpha + params.beta + 1.0); }

    /// ||P_n^{[1]}||_W from the closed norm formula sqrt(n(n+a+b+1)+lambda~).
    double sigma(int n) const {
        if (classical) return 1.0 / b_tilde(0.0);
        const double a = params.alpha, bb = params.beta;
        if (!(a + 0.5 * eps1 > -0.5))
            throw std::domain_error("sigma: hypothesis alpha + eps1/2 > -1/2 violated (value " +
                                    std::to_string(a + 0.5 * eps1) + ")");
        if (!(bb + 0.5 * eps2 > -0.5))
            throw std::domain_error("sigma: hypothesis beta + eps2/2 > -1/2 violated (value " +
                                    std::to_string(bb + 0.5 * eps2) + ")");
        return std::sqrt(double(n) * (n + a + bb + 1.0) + lambda_tilde);
    }

    /// W(x) = (1-x)^{alpha+eps1} (1+x)^{beta+eps2} / b_tilde(x)^2 on (-1,1).
    double weight(double x) const {
        if (!(x > -1.0 && x < 1.0)) throw std::domain_error("weight: x outside (-1,1)");
        JacobiParams wp = weight_params();
        double bt = b_tilde(x);
        return std::pow(1.0 - x, wp.alpha) * std::pow(1.0 + x, wp.beta) / (bt * bt);
    }

    /// P_n^{[1]}(x) = b(x) p_n'(x) - (bw)(x) p_n(x), assembled from the
    /// recurrence and the derivative identity (never expanded coefficients).
    template <class T>
    T exceptional(int n, T x) const {
        if (classical) return jacobi_orthonormal_eval(n, params, x);
        T pn = jacobi_orthonormal_eval(n, params, x);
        T dpn = jacobi_orthonormal_derivative(n, params, x, 1);
        return T(b(x)) * dpn - T(bw(x)) * pn;
    }

    /// order-th derivative of P_n^{[1]} (order <= 2), by the product rule and
    /// the derivative identity.
    template <class T>
    T exceptional_derivative(int n, T x, int order) const {
        if (classical) return jacobi_orthonormal_derivative(n, params, x, order);
        T p0 = jacobi_orthonormal_eval(n, params, x);
        T p1 = jacobi_orthonormal_derivative(n, params, x, 1);
        T p2 = jacobi_orthonormal_derivative(n, params, x, 2);
        if (order == 1) return T(b(x)) * p2 + T(b_prime(x)) * p1 - T(bw(x)) * p1 - T(bw_prime(x)) * p0;
        if (order == 2) {
            T p3 = jacobi_orthonormal_derivative(n, params, x, 3);
            return T(b(x)) * p3 + T(2.0 * b_prime(x)) * p2 + T(b_second(x)) * p1 - T(bw(x)) * p2 -
                   T(2.0 * bw_prime(x)) * p1 - T(bw_second(x)) * p0;
        }
        throw std::domain_error("exceptional_derivative: order must be 1 or 2");
    }

    /// Orthonormal exceptional polynomial \hat P_n = P_n^{[1]} / sigma_n.
    template <class T>
    T orthonormal(int n, T x) const {
        return exceptional(n, x) / T(sigma(n));
    }

    /// Seed log-derivative w(x) = phi'/phi and its derivative, as rational
    /// functions of the stored seed polynomial (independent of the s factor).
    double log_derivative_w(double x) const {
        if (classical) throw FamilyError("log_derivative_w: not defined for the classical family");
        double v = seed_value_.eval(x), dv = seed_deriv_.eval(x);
        double w = dv / v;
        const double a = params.alpha, bb = params.beta;
        switch (seed.kind) {
            case SeedKind::TypeI: return a / (1.0 - x) + w;
            case SeedKind::TypeII: return -bb / (1.0 + x) + w;
            default: return a / (1.0 - x) - bb / (1.0 + x) + w;
        }
    }
    double log_derivative_w_prime(double x) const {
        if (classical) throw FamilyError("log_derivative_w_prime: not defined for the classical family");
        double v = seed_value_.eval(x), dv = seed_deriv_.eval(x), ddv = seed_second_.eval(x);
        double wp = (ddv * v - dv * dv) / (v * v);
        const double a = params.alpha, bb = params.beta;
        switch (seed.kind) {
            case SeedKind::TypeI: return a / ((1.0 - x) * (1.0 - x)) + wp;
            case SeedKind::TypeII: return bb / ((1.0 + x) * (1.0 + x)) + wp;
            default: return a / ((1.0 - x) * (1.0 - x)) + bb / ((1.0 + x) * (1.0 + x)) + wp;
        }
    }

    /// deg P_n^{[1]} for generic n (n + deg b - 1; n for the classical case).
    int expected_degree(int n) const { return classical ? n : n + b.degree() - 1; }

    /// b = (1-x)^{(1-eps1)/2} b1; only meaningful when eps1 = -1.
    Polynomial b1() const {
        if (eps1 != -1) throw FamilyError("b1: defined only when eps1 = -1 (b(1) = 0)");
        Polynomial r = b_tilde;
        if (eps2 == -1) r = r * Polynomial{1.0, 1.0};
        return r;
    }

    // build_family wires these up
    Polynomial seed_value_, seed_deriv_, seed_second_;
};

/// Batch evaluation of \hat P_0 .. \hat P_K at many nodes; returns
/// table[k][i] = \hat P_k(nodes[i]). This is the workhorse behind every
/// quadrature in the op-matrix and spectra modules.
inline std::vector<std::vector<double>> orthonormal_values_table(const ExceptionalFamily& fam, int K,
                                                                 const std::vector<double>& nodes) {
    std::vector<std::vector<double>> tab(K + 1, std::vector<double>(nodes.size()));
    if (fam.classical) {
        MonicRecurrence rec = jacobi_monic_recurrence(K + 1, fam.params);
        const double c = fam.b_tilde(0.0);
        std::vector<double> vals;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            jacobi_orthonormal_all(K, fam.params, nodes[i], vals, &rec);
            for (int k = 0; k <= K; ++k) tab[k][i] = c * vals[k];
        }
        return tab;
    }
    const JacobiParams base = fam.params, up = fam.params.shifted(1.0, 1.0);
    MonicRecurrence rec0 = jacobi_monic_recurrence(K + 2, base);
    MonicRecurrence rec1 = jacobi_monic_recurrence(K + 2, up);
    std::vector<double> dfac(K + 1, 0.0), sig(K + 1);
    for (int k = 0; k <= K; ++k) {
        sig[k] = fam.sigma(k);
        if (k >= 1) dfac[k] = jacobi_derivative_as_jacobi(k, base).factor;
    }
    std::vector<double> p0, p1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        const double bx = fam.b(x), bwx = fam.bw(x);
        jacobi_orthonormal_all(K, base, x, p0, &rec0);
        jacobi_orthonormal_all(std::max(K - 1, 0), up, x, p1, &rec1);
        tab[0][i] = -bwx * p0[0] / sig[0];
        for (int k = 1; k <= K; ++k) tab[k][i] = (bx * dfac[k] * p1[k - 1] - bwx * p0[k]) / sig[k];
    }
    return tab;
}

/// Rational function as a numerator/denominator pair.
struct RationalFn {
    Polynomial num, den;
    double operator()(double x) const { return num(x) / den(x); }
};

/// Coefficients of the partner operator: AB + lambda~ = p d^2 + q_hat d + r_hat.
struct PartnerCoefficients {
    RationalFn q_hat, r_hat;
};

namespace detail {

inline Polynomial p_coeff_poly() { return Polynomial{1.0, 0.0, -1.0}; }  // 1 - x^2

inline Polynomial q_coeff_poly(const JacobiParams& p) {
    return Polynomial{p.beta - p.alpha, -(p.alpha + p.beta + 2.0)};
}

}  // namespace detail

inline PartnerCoefficients partner_coefficients(const ExceptionalFamily& fam) {
    if (fam.classical) throw FamilyError("partner_coefficients: not defined for the classical family");
    const Polynomial p = detail::p_coeff_poly();
    const Polynomial q = detail::q_coeff_poly(fam.params);
    const Polynomial dp = p.derivative();
    const Polynomial dq = q.derivative();
    PartnerCoefficients pc;
    // q_hat = q + p' - 2 (b'/b) p
    pc.q_hat.num = (q + dp) * fam.b - 2.0 * (fam.b_prime * p);
    pc.q_hat.den = fam.b;
    // r_hat = q' + w p' - (b'/b)(q + p') + (2(b'/b)^2 - b''/b + 2 w') p, w = bw/b
    Polynomial b2 = fam.b * fam.b;
    Polynomial wp_num = fam.bw_prime * fam.b - fam.bw * fam.b_prime;  // w' * b^2
    pc.r_hat.num = dq * b2 + fam.bw * fam.b * dp - fam.b_prime * ((q + dp) * fam.b) +
                   (2.0 * (fam.b_prime * fam.b_prime) - fam.b_second * fam.b + 2.0 * wp_num) * p;
    pc.r_hat.den = b2;
    return pc;
}

/// Max relative residual of the first-order intertwining identity
///   p (P_n^{[1]})' + (pw + q - p b'/b) P_n^{[1]} = (lambda_n - lambda~) b p_n
/// over 20 interior Chebyshev points.
inline double intertwining_check(const ExceptionalFamily& fam, int n) {
    if (fam.classical) throw FamilyError("intertwining_check: not defined for the classical family");
    const Polynomial pp = detail::p_coeff_poly();
    const Polynomial qq = detail::q_coeff_poly(fam.params);
    double worst = 0.0;
    for (int j = 1; j <= 20; ++j) {
        double x = std::cos((2.0 * j - 1.0) * std::numbers::pi / 40.0);
        double bx = fam.b(x);
        if (std::fabs(bx) < 1e-6) continue;
        double P = fam.exceptional(n, x);
        double dP = fam.exceptional_derivative(n, x, 1);
        double pn = jacobi_orthonormal_eval(n, fam.params, x);
        double pw = pp(x) * fam.bw(x) / bx;
        double lhs = pp(x) * dP + (pw + qq(x) - pp(x) * fam.b_prime(x) / bx) * P;
        double rhs = (fam.lambda_n(n) - fam.lambda_tilde) * bx * pn;
        double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
        worst = std::max(worst, std::fabs(lhs - rhs) / scale);
    }
    return worst;
}

/// Builds and validates a one-step family. Throws FamilyError with a message
/// naming the violated precondition.
inline ExceptionalFamily build_family(const JacobiParams& params, const SeedChoice& seed,
                                      bool sign_normalize = true) {
    require_orthogonal(params, "build_family");
    if (seed.m < 1) throw FamilyError("seed degree m must be >= 1");

    // s must be zero-free near [-1,1]
    if (seed.s.degree() >= 1) {
        auto sroots = real_roots_in(seed.s, -1.001, 1.001);
        if (!sroots.empty()) throw FamilyError("s has a zero in [-1.001, 1.001]");
    }
    if (seed.s.is_zero()) throw FamilyError("s is the zero polynomial");

    JacobiParams seed_params;
    switch (seed.kind) {
        case SeedKind::TypeI: seed_params = {-params.alpha, params.beta}; break;
        case SeedKind::TypeII: seed_params = {params.alpha, -params.beta}; break;
        case SeedKind::TypeIII: seed_params = {-params.alpha, -params.beta}; break;
    }
    bool degenerate = false;
    Polynomial seed_poly = jacobi_polynomial(seed.m, seed_params, &degenerate);
    if (degenerate)
        throw FamilyError("seed polynomial degenerates: leading coefficient of P_m^{(" +
                          std::to_string(seed_params.alpha) + "," + std::to_string(seed_params.beta) +
                          ")} vanishes");
    auto inner = real_roots_in(seed_poly, -1.0 - 1e-9, 1.0 + 1e-9);
    if (!inner.empty()) throw FamilyError("seed has zero in [-1,1]");

    ExceptionalFamily fam;
    fam.params = params;
    fam.seed = seed;
    fam.seed_value_ = seed_poly;
    fam.seed_deriv_ = seed_poly.derivative();
    fam.seed_second_ = fam.seed_deriv_.derivative();

    const double a = params.alpha, bb = params.beta;
    Polynomial endpoint;
    Polynomial bw0;  // b0 * w, expanded exactly
    switch (seed.kind) {
        case SeedKind::TypeI:
            endpoint = Polynomial{1.0, -1.0};  // 1 - x
            fam.eps1 = -1;
            fam.eps2 = +1;
            bw0 = a * seed_poly + Polynomial{1.0, -1.0} * fam.seed_deriv_;
            fam.lambda_tilde_closed_form = (a - seed.m) * (seed.m + bb + 1.0);
            break;
        case SeedKind::TypeII:
            endpoint = Polynomial{1.0, 1.0};  // 1 + x
            fam.eps1 = +1;
            fam.eps2 = -1;
            bw0 = (-bb) * seed_poly + Polynomial{1.0, 1.0} * fam.seed_deriv_;
            fam.lambda_tilde_closed_form = (bb - seed.m) * (seed.m + a + 1.0);
            break;
        case SeedKind::TypeIII:
            endpoint = Polynomial{1.0, 0.0, -1.0};  // 1 - x^2
            fam.eps1 = -1;
            fam.eps2 = -1;
            bw0 = a * (Polynomial{1.0, 1.0} * seed_poly) - bb * (Polynomial{1.0, -1.0} * seed_poly) +
                  Polynomial{1.0, 0.0, -1.0} * fam.seed_deriv_;
            fam.lambda_tilde_closed_form = (a + bb - seed.m) * (seed.m + 1.0);
            break;
    }
    fam.b_tilde = seed.s * seed_poly;
    fam.b = endpoint * fam.b_tilde;
    fam.bw = seed.s * bw0;

    if (sign_normalize && fam.b_tilde(0.0) < 0.0) {
        fam.b_tilde *= -1.0;
        fam.b *= -1.0;
        fam.bw *= -1.0;
    }
    // b_tilde must be bounded away from zero on [-1,1]
    double btmin = std::numeric_limits<double>::max();
    for (int j = 0; j <= 400; ++j) {
        double x = -1.0 + 2.0 * j / 400.0;
        btmin = std::min(btmin, fam.b_tilde(x));
    }
    if (!(btmin > 0.0) && sign_normalize)
        throw FamilyError("b_tilde is not positive on [-1,1] after sign normalization");

    fam.b_prime = fam.b.derivative();
    fam.b_second = fam.b_prime.derivative();
    fam.bw_prime = fam.bw.derivative();
    fam.bw_second = fam.bw_prime.derivative();
    fam.codim = fam.b_tilde.degree();
    fam.L = fam.codim + 1;

    // bw really is b*w: compare against the log-derivative form pointwise
    double bw_res = 0.0;
    for (int j = 1; j <= 32; ++j) {
        double x = std::cos((2.0 * j - 1.0) * std::numbers::pi / 64.0);
        double lhs = fam.b(x) * fam.log_derivative_w(x);
        bw_res = std::max(bw_res, std::fabs(lhs - fam.bw(x)) / std::max(1.0, std::fabs(fam.bw(x))));
    }
    fam.bw_residual = bw_res;
    if (bw_res > 1e-10) throw FamilyError("bw not polynomial: b*w simplification residual " +
                                          std::to_string(bw_res));

    // lambda~ from the Riccati identity p(w' + w^2) + q w = lambda~, median of
    // 50 interior samples, then the residual must be flat.
    const Polynomial pp = detail::p_coeff_poly();
    const Polynomial qq = detail::q_coeff_poly(params);
    std::vector<double> lam;
    for (int j = 1; j <= 50; ++j) {
        double x = std::cos((2.0 * j - 1.0) * std::numbers::pi / 100.0);
        double w = fam.log_derivative_w(x);
        double wp = fam.log_derivative_w_prime(x);
        lam.push_back(pp(x) * (wp + w * w) + qq(x) * w);
    }
    std::vector<double> sorted = lam;
    std::sort(sorted.begin(), sorted.end());
    fam.lambda_tilde = sorted[sorted.size() / 2];
    double ric = 0.0;
    for (double v : lam) ric = std::max(ric, std::fabs(v - fam.lambda_tilde));
    fam.riccati_residual = ric / (1.0 + std::fabs(fam.lambda_tilde));
    if (fam.riccati_residual > 1e-8)
        throw FamilyError("Riccati residual not constant: relative spread " +
                          std::to_string(fam.riccati_residual));

    // finite moments of W (also requires the Gauss weight pair to be valid)
    JacobiParams wp = fam.weight_params();
    if (!wp.orthogonal_regime())
        throw FamilyError("weight moments diverge: alpha+eps1 <= -1 or beta+eps2 <= -1");
    const Polynomial bt = fam.b_tilde;
    try {
        integrate_adaptive([&](double x) { double t = bt(x); return 1.0 / (t * t); }, wp);
        integrate_adaptive([&](double x) { double t = bt(x); return x * x / (t * t); }, wp);
    } catch (const NumericalError&) {
        throw FamilyError("weight moments diverge: adaptive quadrature did not stabilize");
    }
    return fam;
}

/// Codimension-zero reference family: \hat P_n = c p_n^{(a,b)}, W = w^{(a,b)}/c^2,
/// Q = c x. Used to pin the degenerate b_tilde = const cases in tests.
inline ExceptionalFamily make_classical_family(const JacobiParams& weight_params, double c = 1.0) {
    require_orthogonal(weight_params, "make_classical_family");
    if (!(c > 0.0)) throw FamilyError("make_classical_family: c must be positive");
    ExceptionalFamily fam;
    fam.classical = true;
    fam.params = weight_params;
    fam.b = Polynomial::constant(c);
    fam.b_tilde = Polynomial::constant(c);
    fam.bw = Polynomial();  // zero
    fam.b_prime = fam.b_second = fam.bw_prime = fam.bw_second = Polynomial();
    fam.eps1 = fam.eps2 = 0;
    fam.lambda_tilde = fam.lambda_tilde_closed_form = 0.0;
    fam.L = 1;
    fam.codim = 0;
    return fam;
}

}  // namespace exjacobi

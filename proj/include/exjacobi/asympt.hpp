#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

#include "exjacobi/bessel.hpp"
#include "exjacobi/darboux.hpp"
#include "exjacobi/errors.hpp"
#include "exjacobi/roots.hpp"
#include "exjacobi/spectra.hpp"

namespace exjacobi {

namespace detail {

/// Value m * 2^e; keeps high-degree polynomial evaluations in range.
struct ScaledC {
    Complex m{0.0, 0.0};
    long e = 0;

    Complex to_complex() const { return Complex(std::ldexp(m.real(), static_cast<int>(e)),
                                                std::ldexp(m.imag(), static_cast<int>(e))); }
    double log2_abs() const { return std::log2(std::abs(m)) + static_cast<double>(e); }
};

inline Complex scaled_ratio(const ScaledC& num, const ScaledC& den) {
    Complex r = num.m / den.m;
    int d = static_cast<int>(num.e - den.e);
    return Complex(std::ldexp(r.real(), d), std::ldexp(r.imag(), d));
}

/// Joint scaled evaluation of P^{[1]}_k(z) (and optionally its derivative)
/// for k = n-1, n. Runs the orthonormal recurrences for (a,b), (a+1,b+1) and
/// (a+2,b+2) side by side under one common binary exponent.
struct ScaledFamilyEval {
    ScaledC P_nm1, P_n;    // P^{[1]}_{n-1}(z), P^{[1]}_n(z)
    ScaledC dP_n;          // d/dx P^{[1]}_n(z)
    ScaledC p_n, dp_n;     // classical orthonormal p_n(z) and p_n'(z)
};

inline ScaledFamilyEval exceptional_scaled_eval(const ExceptionalFamily& fam, int n, Complex z) {
    const JacobiParams base = fam.params;
    const JacobiParams up = base.shifted(1, 1), upup = base.shifted(2, 2);
    MonicRecurrence r0 = jacobi_monic_recurrence(n + 2, base);
    MonicRecurrence r1 = jacobi_monic_recurrence(n + 2, up);
    MonicRecurrence r2 = jacobi_monic_recurrence(n + 2, upup);
    std::vector<double> a0(n + 2), a1(n + 2), a2(n + 2);
    for (int k = 0; k <= n + 1; ++k) {
        a0[k] = std::sqrt(r0.beta[k]);
        a1[k] = std::sqrt(r1.beta[k]);
        a2[k] = std::sqrt(r2.beta[k]);
    }
    std::vector<double> dfac(n + 1, 0.0), ddfac(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        dfac[k] = jacobi_derivative_as_jacobi(k, base).factor;
        if (k >= 2) ddfac[k] = dfac[k] * jacobi_derivative_as_jacobi(k - 1, up).factor;
    }

    // carried values: p (deg k, k-1), q = shifted (k, k-1), s = twice-shifted (k, k-1, k-2)
    Complex p0(1.0 / a0[0], 0.0), pm(0.0, 0.0);
    Complex q0(1.0 / a1[0], 0.0), qm(0.0, 0.0);
    Complex s0(1.0 / a2[0], 0.0), sm(0.0, 0.0), smm(0.0, 0.0);
    long E = 0;

    auto advance = [&](int k) {
        Complex pn = ((z - r0.alpha[k]) * p0 - (k > 0 ? a0[k] : 0.0) * pm) / a0[k + 1];
        Complex qn = ((z - r1.alpha[k]) * q0 - (k > 0 ? a1[k] : 0.0) * qm) / a1[k + 1];
        Complex sn = ((z - r2.alpha[k]) * s0 - (k > 0 ? a2[k] : 0.0) * sm) / a2[k + 1];
        pm = p0; p0 = pn;
        qm = q0; q0 = qn;
        smm = sm; sm = s0; s0 = sn;
        double big = std::max({std::abs(p0), std::abs(pm), std::abs(q0), std::abs(qm),
                               std::abs(s0), std::abs(sm), std::abs(smm)});
        if (big > 0x1p+600) {
            const double f = 0x1p-600;
            p0 *= f; pm *= f; q0 *= f; qm *= f; s0 *= f; sm *= f; smm *= f;
            E += 600;
        }
    };

    Complex bz = fam.b.eval(z), bwz = fam.bw.eval(z);
    Complex dbz = fam.b_prime.eval(z), dbwz = fam.bw_prime.eval(z);

    auto assemble = [&](int k) -> ScaledC {
        // P^{[1]}_k = b * p_k' - bw * p_k, p_k' = dfac_k * q_{k-1}
        Complex dp = k >= 1 ? dfac[k] * qm : Complex(0.0, 0.0);
        if (fam.classical) return {p0, E};
        return {bz * dp - bwz * p0, E};
    };
    auto assemble_deriv = [&](int k) -> ScaledC {
        Complex dp = k >= 1 ? dfac[k] * qm : Complex(0.0, 0.0);
        Complex ddp = k >= 2 ? ddfac[k] * smm : Complex(0.0, 0.0);
        if (fam.classical) return {dp, E};
        return {bz * ddp + dbz * dp - bwz * dp - dbwz * p0, E};
    };

    ScaledFamilyEval out;
    if (n == 0) {
        out.P_n = assemble(0);
        out.dP_n = assemble_deriv(0);
        out.P_nm1 = {Complex(0.0, 0.0), 0};
        out.p_n = {p0, E};
        out.dp_n = {Complex(0.0, 0.0), 0};
        return out;
    }
    for (int k = 0; k < n; ++k) {
        if (k == n - 1) out.P_nm1 = assemble(k);
        advance(k);
    }
    out.P_n = assemble(n);
    out.dP_n = assemble_deriv(n);
    out.p_n = {p0, E};
    out.dp_n = {dfac[n] * qm, E};
    return out;
}

/// Newton on the normalized ratio H(z) = P_n^{[1]}(z) / p_n(z): the
/// exponential growth off [-1,1] divides out, so the iteration homes in on
/// the exceptional zero without the growth term masking it.
struct RatioNewton {
    Complex z;
    bool converged = false;
};

inline RatioNewton ratio_newton(const ExceptionalFamily& fam, int n, Complex z0, int max_steps = 80) {
    Complex z = z0;
    for (int it = 0; it < max_steps; ++it) {
        auto ev = exceptional_scaled_eval(fam, n, z);
        // H'/H = P'/P - p'/p; Newton step = H/H' = 1/(P'/P - p'/p)
        Complex lp = scaled_ratio(ev.dP_n, ev.P_n);
        Complex lq = scaled_ratio(ev.dp_n, ev.p_n);
        Complex denom = lp - lq;
        if (std::abs(denom) == 0.0) break;
        Complex step = 1.0 / denom;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return {z0, false};
        if (std::abs(step) <= 1e-11 * (1.0 + std::abs(z))) return {z, true};
    }
    return {z, false};
}

inline double distance_to_segment(Complex z) {
    if (z.real() >= -1.0 && z.real() <= 1.0) return std::fabs(z.imag());
    return std::min(std::abs(z - Complex(1.0, 0.0)), std::abs(z + Complex(1.0, 0.0)));
}

}  // namespace detail

/// Branch of z - sqrt(z^2-1) with modulus < 1 on C \ [-1,1].
inline Complex joukowski_inverse_inner(Complex z) {
    Complex w = std::sqrt(z * z - Complex(1.0, 0.0));
    return std::abs(z - w) <= 1.0 ? z - w : z + w;
}

/// Regular zeros of P_n^{[1]} in (-1,1) by sign changes of \hat P_n over a
/// fine theta grid, bisection, and a short Newton polish. Robust at any n.
inline std::vector<double> regular_zeros(const ExceptionalFamily& fam, int n) {
    const int deg = fam.expected_degree(n);
    const int M = 8 * std::max(deg, 4) + 64;
    std::vector<double> xs(M), vals(M);
    for (int i = 0; i < M; ++i) {
        double th = std::numbers::pi * (M - i - 0.5) / M;  // ascending in x
        xs[i] = std::cos(th);
    }
    {
        auto tab = orthonormal_values_table(fam, n, xs);
        for (int i = 0; i < M; ++i) vals[i] = tab[n][i];
    }
    std::vector<double> zeros;
    auto f = [&](double x) { return fam.exceptional(n, x); };
    for (int i = 0; i + 1 < M; ++i) {
        if (vals[i] == 0.0) {
            zeros.push_back(xs[i]);
            continue;
        }
        if (vals[i] * vals[i + 1] < 0.0) {
            double lo = xs[i], hi = xs[i + 1], flo = vals[i];
            for (int it = 0; it < 40; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm > 0) == (flo > 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            double x = 0.5 * (lo + hi);
            for (int it = 0; it < 3; ++it) {
                double d = fam.exceptional_derivative(n, x, 1);
                if (d == 0.0) break;
                double step = f(x) / d;
                if (!std::isfinite(step)) break;
                double xn = x - step;
                if (xn <= -1.0 || xn >= 1.0) break;
                x = xn;
            }
            zeros.push_back(x);
        }
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

/// Regular / exceptional split of the zeros of P_n^{[1]}. Regular zeros are
/// found by bisection on the recurrence evaluation; exceptional zeros come
/// from the expanded companion matrix for small degree and from Newton
/// iterations seeded at the zeros of b_tilde for large degree. clean reports
/// whether the bookkeeping (counts vs. degree) worked out.
struct ZeroSplit {
    int n = 0;
    int expected_degree = 0;
    std::vector<double> regular;      // sorted, in (-1,1)
    std::vector<Complex> exceptional; // outside, with multiplicity
    bool clean = true;
};

inline ZeroSplit zero_split(const ExceptionalFamily& fam, int n) {
    ZeroSplit out;
    out.n = n;
    out.expected_degree = fam.expected_degree(n);
    out.regular = regular_zeros(fam, n);
    const int want_exceptional = out.expected_degree - static_cast<int>(out.regular.size());
    if (fam.codim == 0) {
        out.clean = want_exceptional == 0;
        return out;
    }

    auto in_regular_window = [](Complex z) {
        return std::fabs(z.imag()) <= 1e-8 && z.real() > -1.0 + 1e-10 && z.real() < 1.0 - 1e-10;
    };

    // representatives with multiplicity; merged again after polishing.
    // Candidates whose Newton polish does not converge are discarded: past
    // degree ~40 the expanded companion matrix sheds spurious complex roots.
    std::vector<std::pair<Complex, int>> reps;
    if (out.expected_degree <= 40 && !fam.classical) {
        // expanded-coefficient route, then recurrence-based Newton refinement
        Polynomial pn = jacobi_polynomial(n, fam.params);
        pn *= 1.0 / jacobi_norm(n, fam.params);
        Polynomial expanded = fam.b * pn.derivative() - fam.bw * pn;
        ComplexRootSet rs = poly_roots(expanded);
        for (std::size_t i = 0; i < rs.roots.size(); ++i)
            if (!in_regular_window(rs.roots[i])) {
                auto nr = detail::ratio_newton(fam, n, rs.roots[i]);
                if (nr.converged) reps.emplace_back(nr.z, rs.multiplicity[i]);
            }
    } else {
        // Newton from the zeros of b_tilde (the exceptional zeros' limits)
        ComplexRootSet bt = poly_roots(fam.b_tilde);
        for (std::size_t i = 0; i < bt.roots.size(); ++i)
            for (int m = 0; m < bt.multiplicity[i]; ++m) {
                Complex seed = bt.roots[i] + 1e-3 * Complex(1.0 + m, m ? 1.0 : 0.0);
                auto nr = detail::ratio_newton(fam, n, seed);
                if (nr.converged) reps.emplace_back(nr.z, 1);
            }
    }
    std::vector<std::pair<Complex, int>> merged;
    for (auto [z, mult] : reps) {
        if (in_regular_window(z)) continue;
        bool dup = false;
        for (auto& [w, wm] : merged)
            if (std::abs(w - z) <= 1e-7 * (1.0 + std::abs(z))) dup = true;
        if (!dup) merged.emplace_back(z, mult);
    }
    for (auto [z, mult] : merged)
        for (int m = 0; m < mult; ++m) out.exceptional.push_back(z);
    out.clean = static_cast<int>(out.exceptional.size()) == want_exceptional;
    return out;
}

inline double hausdorff_distance(const std::vector<Complex>& A, const std::vector<Complex>& B) {
    if (A.empty() && B.empty()) return 0.0;
    if (A.empty() || B.empty()) return std::numeric_limits<double>::infinity();
    auto one_sided = [](const std::vector<Complex>& X, const std::vector<Complex>& Y) {
        double worst = 0.0;
        for (Complex x : X) {
            double best = std::numeric_limits<double>::infinity();
            for (Complex y : Y) best = std::min(best, std::abs(x - y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(A, B), one_sided(B, A));
}

/// Hausdorff distance between the exceptional zeros of P_n^{[1]} and the
/// zeros of b_tilde.
inline double exceptional_zero_gap(const ExceptionalFamily& fam, int n) {
    if (fam.codim == 0) return 0.0;
    ZeroSplit zs = zero_split(fam, n);
    ComplexRootSet bt = poly_roots(fam.b_tilde);
    std::vector<Complex> btroots;
    for (std::size_t i = 0; i < bt.roots.size(); ++i)
        for (int m = 0; m < bt.multiplicity[i]; ++m) btroots.push_back(bt.roots[i]);
    return hausdorff_distance(zs.exceptional, btroots);
}

/// P_{n-1}^{[1]}(z) / P_n^{[1]}(z); requires z away from [-1,1] and from the
/// zeros of b_tilde (distance > 0.05).
inline Complex ratio_asymptotics(const ExceptionalFamily& fam, Complex z, int n) {
    if (detail::distance_to_segment(z) <= 0.05)
        throw std::domain_error("ratio_asymptotics: z too close to [-1,1]");
    if (fam.b_tilde.degree() >= 1) {
        ComplexRootSet bt = poly_roots(fam.b_tilde);
        for (Complex r : bt.roots)
            if (std::abs(z - r) <= 0.05)
                throw std::domain_error("ratio_asymptotics: z too close to a zero of b_tilde");
    }
    auto ev = detail::exceptional_scaled_eval(fam, n, z);
    return detail::scaled_ratio(ev.P_nm1, ev.P_n);
}

/// Scaled Mehler-Heine pair: (rho_n / n^{alpha+1+eps1}) P_n^{[1]}(cos(z/n))
/// and its Bessel limit, following the per-sign closed forms
///   eps1 = +1:  b(1)/(2 Gamma(a+2)) j_{a+1}(z)
///   eps1 = -1:  -b1(1)/Gamma(a) j_{a-1}(z),  b = (1-x) b1.
struct MehlerHeine {
    Complex scaled;
    Complex limit;
    double rel_err;
};

inline MehlerHeine mehler_heine(const ExceptionalFamily& fam, Complex z, int n) {
    if (fam.classical) throw FamilyError("mehler_heine: not defined for the classical family");
    const double a = fam.params.alpha;
    if (!(a >= -0.5 * fam.eps1))
        throw std::domain_error("mehler_heine: hypothesis alpha >= -eps1/2 violated");
    Complex x = std::cos(z / double(n));
    // rho_n P_n^{[1]} = b P_n' - bw P_n with the classical (capital) P_n
    Complex Pn = jacobi_eval(n, fam.params, x);
    Complex dPn = jacobi_classical_derivative(n, fam.params, x);
    Complex num = fam.b.eval(x) * dPn - fam.bw.eval(x) * Pn;
    MehlerHeine out;
    if (fam.eps1 == +1) {
        out.scaled = num / std::pow(double(n), a + 2.0);
        out.limit = fam.b(1.0) / (2.0 * std::tgamma(a + 2.0)) * bessel_j_small(a + 1.0, z);
    } else {
        out.scaled = num / std::pow(double(n), a);
        out.limit = -fam.b1()(1.0) / std::tgamma(a) * bessel_j_small(a - 1.0, z);
    }
    out.rel_err = std::abs(out.scaled - out.limit) / std::abs(out.limit);
    return out;
}

/// Fit of the Erdos-Turan constant at the smallest size:
/// C = sup_disc(n0) / sqrt(log n0 / n0); frozen afterwards.
inline double fit_c2_constant(const ExceptionalFamily& fam, int n0 = 50) {
    auto rz = regular_zeros(fam, n0);
    double v = sup_discrepancy(angles_from_points(rz));
    return v / std::sqrt(std::log(double(n0)) / n0);
}

struct DiscrepancyResult {
    double value;
    double bound;
};

/// Sup-interval discrepancy of the regular-zero angles, with the fitted
/// c sqrt(log n / n) bound. Hypothesis: alpha, beta >= -1/2.
inline DiscrepancyResult regular_zero_discrepancy(const ExceptionalFamily& fam, int n, double C) {
    if (!(fam.params.alpha >= -0.5 && fam.params.beta >= -0.5))
        throw std::domain_error("regular_zero_discrepancy: requires alpha, beta >= -1/2");
    auto rz = regular_zeros(fam, n);
    DiscrepancyResult r;
    r.value = sup_discrepancy(angles_from_points(rz));
    r.bound = C * std::sqrt(std::log(double(n)) / n);
    return r;
}

/// --- CSV exports -------------------------------------------------------------

inline void write_ratio_csv(std::ostream& os,
                            const std::vector<std::tuple<int, Complex, double>>& rows) {
    csv_row(os, "n", "z", "ratio_error");
    for (const auto& [n, z, e] : rows) csv_row(os, n, z, e);
}

inline void write_hausdorff_csv(std::ostream& os, const std::vector<std::pair<int, double>>& rows) {
    csv_row(os, "n", "hausdorff_gap");
    for (const auto& [n, g] : rows) csv_row(os, n, g);
}

inline void write_mh_csv(std::ostream& os,
                         const std::vector<std::tuple<int, Complex, Complex, Complex, double>>& rows) {
    csv_row(os, "n", "z", "mh_scaled", "mh_limit", "rel_err");
    for (const auto& [n, z, s, l, e] : rows) csv_row(os, n, z, s, l, e);
}

inline void write_regular_zero_discrepancy_csv(
    std::ostream& os, const std::vector<std::tuple<int, double, double>>& rows) {
    csv_row(os, "n", "discrepancy", "bound");
    for (const auto& [n, v, b] : rows) csv_row(os, n, v, b);
}

}  // namespace exjacobi

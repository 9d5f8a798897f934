#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "exjacobi/errors.hpp"
#include "exjacobi/polynomial.hpp"

namespace exjacobi {

using Complex = std::complex<double>;

/// Complex roots with multiplicities; close roots are merged by
/// cluster_roots, and count_with_multiplicity() equals the input degree.
struct ComplexRootSet {
    std::vector<Complex> roots;
    std::vector<int> multiplicity;

    int count_with_multiplicity() const {
        int s = 0;
        for (int m : multiplicity) s += m;
        return s;
    }
};

namespace detail {

inline double sign_like(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

/// Parlett-Reinsch balancing of a dense matrix (row-major n*n), in place.
inline void balance_matrix(std::vector<double>& a, int n) {
    const double radix = 2.0, sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::fabs(a[j * n + i]);
                    r += std::fabs(a[i * n + j]);
                }
            if (c != 0.0 && r != 0.0) {
                double g = r / radix, f = 1.0, s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= sqrdx;
                }
                if ((c + r) / f < 0.95 * s) {
                    done = false;
                    g = 1.0 / f;
                    for (int j = 0; j < n; ++j) a[i * n + j] *= g;
                    for (int j = 0; j < n; ++j) a[j * n + i] *= f;
                }
            }
        }
    }
}

/// Francis double-shift QR for a real upper Hessenberg matrix (row-major),
/// destroys a. Classic EISPACK hqr scheme.
inline std::vector<Complex> hessenberg_eigenvalues(std::vector<double>& a, int n) {
    auto A = [&](int i, int j) -> double& { return a[i * n + j]; };
    std::vector<Complex> wri(n);
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(A(i, j));
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l, m;
        do {
            for (l = nn; l > 0; --l) {
                double s = std::fabs(A(l - 1, l - 1)) + std::fabs(A(l, l));
                if (s == 0.0) s = anorm;
                if (std::fabs(A(l, l - 1)) + s == s) {
                    A(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = A(nn, nn);
            if (l == nn) {
                wri[nn--] = x + t;
            } else {
                double y = A(nn - 1, nn - 1);
                double w = A(nn, nn - 1) * A(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::fabs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_like(z, p);
                        wri[nn - 1] = wri[nn] = Complex(x + z, 0.0);
                        if (z != 0.0) wri[nn] = Complex(x - w / z, 0.0);
                    } else {
                        wri[nn] = Complex(x + p, -z);
                        wri[nn - 1] = std::conj(wri[nn]);
                    }
                    nn -= 2;
                } else {
                    if (its == 60) throw NumericalError("hessenberg_eigenvalues: too many QR iterations");
                    if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
                        t += x;
                        for (int i = 0; i < nn + 1; ++i) A(i, i) -= x;
                        double s = std::fabs(A(nn, nn - 1)) + std::fabs(A(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    double p = 0, q = 0, r = 0, z = 0, s = 0;
                    for (m = nn - 2; m >= l; --m) {
                        z = A(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / A(m + 1, m) + A(m, m + 1);
                        q = A(m + 1, m + 1) - z - r - s;
                        r = A(m + 2, m + 1);
                        s = std::fabs(p) + std::fabs(q) + std::fabs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        double u = std::fabs(A(m, m - 1)) * (std::fabs(q) + std::fabs(r));
                        double v = std::fabs(p) *
                                   (std::fabs(A(m - 1, m - 1)) + std::fabs(z) + std::fabs(A(m + 1, m + 1)));
                        if (u + v == v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        A(i + 2, i) = 0.0;
                        if (i != m) A(i + 2, i - 1) = 0.0;
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = A(k, k - 1);
                            q = A(k + 1, k - 1);
                            r = 0.0;
                            if (k + 1 != nn) r = A(k + 2, k - 1);
                            x = std::fabs(p) + std::fabs(q) + std::fabs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign_like(std::sqrt(p * p + q * q + r * r), p);
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) A(k, k - 1) = -A(k, k - 1);
                            } else {
                                A(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j < nn + 1; ++j) {
                                p = A(k, j) + q * A(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * A(k + 2, j);
                                    A(k + 2, j) -= p * z;
                                }
                                A(k + 1, j) -= p * y;
                                A(k, j) -= p * x;
                            }
                            int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i < mmin + 1; ++i) {
                                p = x * A(i, k) + y * A(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * A(i, k + 2);
                                    A(i, k + 2) -= p * r;
                                }
                                A(i, k + 1) -= p * q;
                                A(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return wri;
}

inline void horner_with_derivative(const Polynomial& p, Complex z, Complex& val, Complex& der) {
    const auto& c = p.coeffs();
    val = Complex(c.back());
    der = Complex(0.0);
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        der = der * z + val;
        val = val * z + Complex(c[i]);
    }
}

}  // namespace detail

/// Newton refinement of an approximate root; at most max_steps iterations,
/// falls back to the starting point if the iteration wanders off.
inline Complex newton_refine(const Polynomial& p, Complex z0, int max_steps = 50) {
    Complex z = z0, val, der;
    detail::horner_with_derivative(p, z, val, der);
    double best = std::abs(val);
    Complex zbest = z;
    for (int it = 0; it < max_steps; ++it) {
        if (std::abs(der) == 0.0) break;
        Complex step = val / der;
        z -= step;
        detail::horner_with_derivative(p, z, val, der);
        double r = std::abs(val);
        if (r < best) {
            best = r;
            zbest = z;
        }
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
        if (!(std::isfinite(z.real()) && std::isfinite(z.imag()))) return zbest;
    }
    return zbest;
}

/// Merge roots that agree within tol; multiplicities add up.
inline ComplexRootSet cluster_roots(std::vector<Complex> roots, double tol = 1e-7) {
    ComplexRootSet out;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Complex center = roots[i];
        int mult = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (!used[j] && std::abs(roots[j] - center) <= tol) {
                center = (center * double(mult) + roots[j]) / double(mult + 1);
                ++mult;
                used[j] = true;
            }
        }
        out.roots.push_back(center);
        out.multiplicity.push_back(mult);
    }
    return out;
}

/// All complex roots of p: balanced companion-matrix eigenvalues refined by
/// Newton. Throws on constant input.
inline ComplexRootSet poly_roots(const Polynomial& p, double cluster_tol = 1e-7) {
    int deg = p.degree();
    if (deg < 1) throw std::domain_error("poly_roots: constant polynomial");
    const auto& c = p.coeffs();

    std::vector<Complex> raw;
    if (deg == 1) {
        raw.push_back(Complex(-c[0] / c[1], 0.0));
    } else if (deg == 2) {
        // stable quadratic formula
        double a = c[2], b = c[1], cc = c[0];
        Complex disc = std::sqrt(Complex(b * b - 4.0 * a * cc, 0.0));
        Complex q = -0.5 * (b >= 0.0 ? Complex(b) + disc : Complex(b) - disc);
        raw.push_back(q / a);
        raw.push_back(std::abs(q) > 0.0 ? Complex(cc) / q : Complex(0.0));
    } else {
        // companion matrix of the monic polynomial; upper Hessenberg layout
        std::vector<double> comp(static_cast<std::size_t>(deg) * deg, 0.0);
        for (int j = 0; j < deg; ++j) comp[0 * deg + j] = -c[deg - 1 - j] / c[deg];
        for (int i = 1; i < deg; ++i) comp[i * deg + (i - 1)] = 1.0;
        detail::balance_matrix(comp, deg);
        raw = detail::hessenberg_eigenvalues(comp, deg);
    }

    for (auto& z : raw) z = newton_refine(p, z);
    // force exact conjugate pairing for near-real inputs
    std::sort(raw.begin(), raw.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return cluster_roots(std::move(raw), cluster_tol);
}

/// Residual certificate used by the tests: |p(r)| <= 1e-10 * max|coeff| * max(1,|r|)^deg.
inline double root_residual(const Polynomial& p, Complex r) { return std::abs(p.eval(r)); }

inline double root_residual_bound(const Polynomial& p, Complex r) {
    return 1e-10 * p.max_abs_coeff() * std::pow(std::max(1.0, std::abs(r)), p.degree());
}

/// Real roots of p inside [lo, hi] (imaginary part below imag_tol).
inline std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi,
                                         double imag_tol = 1e-8) {
    std::vector<double> out;
    if (p.degree() < 1) return out;
    ComplexRootSet rs = poly_roots(p);
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        Complex z = rs.roots[i];
        if (std::fabs(z.imag()) <= imag_tol && z.real() >= lo && z.real() <= hi)
            for (int m = 0; m < rs.multiplicity[i]; ++m) out.push_back(z.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace exjacobi

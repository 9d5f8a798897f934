#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "exjacobi/eigensolver.hpp"
#include "exjacobi/errors.hpp"
#include "exjacobi/jacobi.hpp"

namespace exjacobi {

/// Gauss rule for the weight (1-x)^alpha (1+x)^beta on (-1,1).
struct QuadratureRule {
    std::vector<double> nodes;    // ascending, inside (-1,1)
    std::vector<double> weights;  // positive
    JacobiParams params;

    template <class F>
    auto integrate(F&& f) const {
        auto acc = decltype(f(0.0))(0);
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Golub-Welsch: nodes are eigenvalues of the n-point Jacobi matrix, weights
/// come from the Christoffel numbers 1/K_n(x_i,x_i) of the orthonormal
/// polynomials (equal to the Gauss weights).
inline QuadratureRule gauss_jacobi_rule(int n_nodes, const JacobiParams& p) {
    if (n_nodes < 1) throw std::domain_error("gauss_jacobi_rule: need at least one node");
    require_orthogonal(p, "gauss_jacobi_rule");
    MonicRecurrence rec = jacobi_monic_recurrence(n_nodes, p);
    std::vector<double> diag(rec.alpha.begin(), rec.alpha.begin() + n_nodes);
    std::vector<double> off(n_nodes > 1 ? n_nodes - 1 : 0);
    for (int k = 1; k < n_nodes; ++k) off[k - 1] = std::sqrt(rec.beta[k]);
    QuadratureRule rule;
    rule.params = p;
    rule.nodes = tridiag_eigenvalues(diag, off);
    rule.weights.resize(n_nodes);
    std::vector<double> pk;
    for (int i = 0; i < n_nodes; ++i) {
        jacobi_orthonormal_all(n_nodes - 1, p, rule.nodes[i], pk, &rec);
        double kn = 0.0;
        for (double v : pk) kn += v * v;
        rule.weights[i] = 1.0 / kn;
    }
    return rule;
}

/// Doubles the node count until two successive values agree to rel_tol;
/// starts at n0 nodes, gives up at n_max.
inline double integrate_adaptive(const std::function<double(double)>& f, const JacobiParams& p,
                                 double rel_tol = 1e-12, int n0 = 64, int n_max = 1 << 15) {
    double prev = 0.0;
    bool have_prev = false;
    for (int n = n0; n <= n_max; n *= 2) {
        QuadratureRule r = gauss_jacobi_rule(n, p);
        double val = r.integrate(f);
        if (have_prev && std::fabs(val - prev) <= rel_tol * std::max(std::fabs(val), 1e-30)) return val;
        prev = val;
        have_prev = true;
    }
    throw NumericalError("integrate_adaptive: quadrature did not stabilize");
}

/// Mean of f over the Chebyshev-Gauss nodes: integrates f against the
/// arcsine (equilibrium) measure of [-1,1], exactly for polynomials of
/// degree <= 2n-1.
template <class F>
double equilibrium_integrate(F&& f, int n) {
    double s = 0.0;
    for (int i = 1; i <= n; ++i) s += f(std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * n)));
    return s / n;
}

}  // namespace exjacobi

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "exjacobi/eigensolver.hpp"
#include "exjacobi/jacobi.hpp"
#include "exjacobi/quadrature.hpp"
#include "exjacobi/roots.hpp"

using namespace exjacobi;

TEST_CASE("classical jacobi values") {
    JacobiParams leg{0.0, 0.0};
    CHECK(jacobi_eval(0, leg, 0.77) == Catch::Approx(1.0));
    CHECK(jacobi_eval(1, leg, 0.5) == Catch::Approx(0.5));
    // P_n^{(a,b)}(1) = binom(n+a, n)
    CHECK(jacobi_eval(2, JacobiParams{1.0, 0.0}, 1.0) == Catch::Approx(3.0));
}

TEST_CASE("jacobi norms") {
    CHECK(jacobi_norm(0, {0.0, 0.0}) == Catch::Approx(std::sqrt(2.0)));
    CHECK(jacobi_norm(0, {3.0, 0.0}) == Catch::Approx(2.0));
    CHECK(jacobi_norm(1, {0.0, 0.0}) == Catch::Approx(std::sqrt(2.0 / 3.0)));
}

TEST_CASE("orthonormal evaluation against classical route") {
    CHECK(jacobi_orthonormal_eval(0, JacobiParams{0.0, 0.0}, 0.9) ==
          Catch::Approx(1.0 / std::sqrt(2.0)));
    CHECK(jacobi_orthonormal_eval(0, JacobiParams{3.0, 0.0}, 0.0) == Catch::Approx(0.5));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-0.99, 0.99);
    for (JacobiParams p : {JacobiParams{3.0, 0.0}, JacobiParams{0.5, 1.5}})
        for (int n : {1, 5, 17, 40}) {
            double x = U(rng);
            double via_norm = jacobi_eval(n, p, x) / jacobi_norm(n, p);
            CHECK(jacobi_orthonormal_eval(n, p, x) == Catch::Approx(via_norm).epsilon(1e-10));
        }
}

TEST_CASE("orthonormality under quadrature") {
    for (JacobiParams p : {JacobiParams{0.0, 0.0}, JacobiParams{3.0, 0.0}, JacobiParams{0.5, 1.5}}) {
        QuadratureRule rule = gauss_jacobi_rule(40, p);
        std::vector<std::vector<double>> vals(31);
        std::vector<double> buf;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            jacobi_orthonormal_all(30, p, rule.nodes[i], buf);
            for (int k = 0; k <= 30; ++k) {
                if (vals[k].empty()) vals[k].resize(rule.nodes.size());
                vals[k][i] = buf[k];
            }
        }
        for (int i = 0; i <= 30; i += 5)
            for (int j = i; j <= 30; j += 7) {
                double s = 0.0;
                for (std::size_t t = 0; t < rule.nodes.size(); ++t)
                    s += rule.weights[t] * vals[i][t] * vals[j][t];
                CHECK(std::fabs(s - (i == j ? 1.0 : 0.0)) <= 1e-11);
            }
    }
}

TEST_CASE("derivative identity") {
    {
        auto d = jacobi_derivative_as_jacobi(1, {0.0, 0.0});
        REQUIRE_FALSE(d.is_zero);
        double v = d.factor * jacobi_orthonormal_eval(0, d.shifted, 0.3);
        CHECK(v == Catch::Approx(std::sqrt(1.5)).epsilon(1e-12));
    }
    {
        auto d = jacobi_derivative_as_jacobi(0, {2.0, 1.0});
        CHECK(d.is_zero);
    }
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-0.95, 0.95);
    JacobiParams p{3.0, 0.0};
    for (int t = 0; t < 20; ++t) {
        double x = U(rng);
        const double h = 1e-6;
        double fd =
            (jacobi_orthonormal_eval(5, p, x + h) - jacobi_orthonormal_eval(5, p, x - h)) / (2 * h);
        double an = jacobi_orthonormal_derivative(5, p, x, 1);
        CHECK(std::fabs(fd - an) <= 1e-6 * std::max(1.0, std::fabs(an)));
    }
}

TEST_CASE("jacobi differential equation residual") {
    for (JacobiParams p : {JacobiParams{0.0, 0.0}, JacobiParams{3.0, 0.0}, JacobiParams{0.5, 1.5}}) {
        for (int n : {1, 7, 18, 30}) {
            for (int j = 1; j <= 20; ++j) {
                double x = std::cos((2.0 * j - 1.0) * std::numbers::pi / 40.0);
                double y = jacobi_orthonormal_eval(n, p, x);
                double dy = jacobi_orthonormal_derivative(n, p, x, 1);
                double ddy = jacobi_orthonormal_derivative(n, p, x, 2);
                double res = (1 - x * x) * ddy + (p.beta - p.alpha - (p.alpha + p.beta + 2) * x) * dy +
                             n * (n + p.alpha + p.beta + 1) * y;
                double scale = std::fabs(n * (n + p.alpha + p.beta + 1) * y) + 1.0;
                CHECK(std::fabs(res) <= 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("gauss-jacobi rules") {
    {
        QuadratureRule r = gauss_jacobi_rule(1, {0.0, 0.0});
        REQUIRE(r.nodes.size() == 1);
        CHECK(r.nodes[0] == Catch::Approx(0.0).margin(1e-15));
        CHECK(r.weights[0] == Catch::Approx(2.0));
    }
    {
        QuadratureRule r = gauss_jacobi_rule(5, {0.0, 0.0});
        double v = r.integrate([](double x) { return x * x * x * x; });
        CHECK(v == Catch::Approx(0.4).margin(1e-14));
    }
    {
        // moments against exact Beta/expansion values, (alpha,beta) = (2,1):
        // (1-x)^2 (1+x) = 1 - x - x^2 + x^3, and int x^j dx over [-1,1] is
        // 2/(j+1) for even j; this is the Beta value computed without
        // cancellation.
        JacobiParams p{2.0, 1.0};
        QuadratureRule r = gauss_jacobi_rule(20, p);
        auto mono = [](long long j) { return j % 2 == 0 ? 2.0 / (j + 1) : 0.0; };
        for (int k = 0; k <= 39; ++k) {
            double want = mono(k) - mono(k + 1) - mono(k + 2) + mono(k + 3);
            double got = r.integrate([&](double x) { return std::pow(x, k); });
            CHECK(std::fabs(got - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
        }
    }
}

TEST_CASE("quadrature exactness invariant") {
    JacobiParams p{0.5, 1.5};
    QuadratureRule r = gauss_jacobi_rule(8, p);
    QuadratureRule big = gauss_jacobi_rule(40, p);
    for (int k = 0; k <= 15; ++k) {
        double got = r.integrate([&](double x) { return std::pow(x, k); });
        double want = big.integrate([&](double x) { return std::pow(x, k); });
        CHECK(std::fabs(got - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
    }
}

TEST_CASE("recurrence evaluation agrees with coefficients in the reflected regime") {
    for (JacobiParams p : {JacobiParams{-3.0, 0.0}, JacobiParams{0.0, -3.0}, JacobiParams{-3.0, -3.0}}) {
        CHECK_FALSE(p.orthogonal_regime());
        for (int m : {1, 2}) {
            bool degenerate = false;
            Polynomial coeffs = jacobi_polynomial(m, p, &degenerate);
            if (degenerate) continue;
            for (double x : {-0.7, 0.0, 0.4, 2.0})
                CHECK(jacobi_eval(m, p, x) == Catch::Approx(coeffs(x)).margin(1e-12));
        }
    }
}

TEST_CASE("reflected parameters and degeneration") {
    bool degenerate = false;
    Polynomial seed = jacobi_polynomial(1, {-3.0, 0.0}, &degenerate);
    CHECK_FALSE(degenerate);
    // P_1^{(-3,0)} = -(3+x)/2
    CHECK(seed[0] == Catch::Approx(-1.5));
    CHECK(seed[1] == Catch::Approx(-0.5));

    jacobi_polynomial(2, {-2.0, -2.0}, &degenerate);
    CHECK(degenerate);  // P_2^{(-2,-2)} degenerates

    Polynomial p233 = jacobi_polynomial(2, {-3.0, -3.0}, &degenerate);
    CHECK_FALSE(degenerate);
    CHECK(p233(0.0) == Catch::Approx(0.25));  // (3x^2+1)/4
    CHECK(p233(1.0) == Catch::Approx(1.0));
}

TEST_CASE("symmetric eigensolver") {
    {
        std::vector<double> a{0.0, 1.0, 1.0, 0.0};
        auto ev = sym_eigenvalues_dense(a, 2);
        CHECK(ev[0] == Catch::Approx(-1.0));
        CHECK(ev[1] == Catch::Approx(1.0));
    }
    {
        std::vector<double> d{3.0, -1.0, 2.0, 7.0};
        auto ev = tridiag_eigenvalues(d, std::vector<double>(3, 0.0));
        CHECK(ev.front() == Catch::Approx(-1.0));
        CHECK(ev.back() == Catch::Approx(7.0));
    }
    {
        // eigen residual ||Mv - lambda v|| <= 1e-8 ||M|| on sampled pairs
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        const int n = 24;
        std::vector<double> m(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) m[i * n + j] = m[j * n + i] = U(rng);
        std::vector<double> vals, vecs;
        sym_eigen_dense(m, n, vals, vecs);
        double norm = 0.0;
        for (double v : m) norm = std::max(norm, std::fabs(v));
        for (int s = 0; s < 5; ++s) {
            int c = (s * 7) % n;
            double res = 0.0;
            for (int i = 0; i < n; ++i) {
                double mv = 0.0;
                for (int j = 0; j < n; ++j) mv += m[i * n + j] * vecs[j * n + c];
                res = std::max(res, std::fabs(mv - vals[c] * vecs[i * n + c]));
            }
            CHECK(res <= 1e-8 * std::max(1.0, norm) * n);
        }
    }
    {
        // Legendre Jacobi matrix eigenvalues = Legendre zeros (companion oracle)
        JacobiParams leg{0.0, 0.0};
        MonicRecurrence rec = jacobi_monic_recurrence(8, leg);
        std::vector<double> d(rec.alpha.begin(), rec.alpha.begin() + 8), e(7);
        for (int k = 1; k < 8; ++k) e[k - 1] = std::sqrt(rec.beta[k]);
        auto ev = tridiag_eigenvalues(d, e);
        Polynomial p8 = jacobi_polynomial(8, leg);
        auto roots = real_roots_in(p8, -1.0, 1.0);
        REQUIRE(roots.size() == 8);
        for (int i = 0; i < 8; ++i) CHECK(std::fabs(ev[i] - roots[i]) < 1e-10);
    }
}

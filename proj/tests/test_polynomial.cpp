#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "exjacobi/bessel.hpp"
#include "exjacobi/polynomial.hpp"
#include "exjacobi/roots.hpp"

using namespace exjacobi;

TEST_CASE("poly_eval basics") {
    Polynomial id = Polynomial::identity();
    CHECK(id(0.3) == Catch::Approx(0.3));

    Polynomial btilde{1.5, 0.5};  // (3+x)/2
    CHECK(btilde(1.0) == Catch::Approx(2.0));

    Polynomial q0_with_const{-1.25, 1.5, 0.25};
    CHECK(q0_with_const(-1.0) == Catch::Approx(-2.5));
    Polynomial q0{0.0, 1.5, 0.25};  // stored with zero constant term
    CHECK(q0(-1.0) == Catch::Approx(-1.25));
}

TEST_CASE("trailing zero coefficients are stripped") {
    Polynomial p{1.0, 2.0, 0.0, 0.0};
    CHECK(p.degree() == 1);
    CHECK(p.leading() == 2.0);
    Polynomial z{0.0, 0.0};
    CHECK(z.is_zero());
    CHECK(z.degree() == 0);
}

TEST_CASE("poly_eval of product equals product of evals") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        int da = 1 + int(rng() % 6), db = 1 + int(rng() % 6);
        std::vector<double> ca(da + 1), cb(db + 1);
        for (auto& v : ca) v = U(rng);
        for (auto& v : cb) v = U(rng);
        Polynomial a(ca), b(cb), prod = a * b;
        std::complex<double> z(U(rng), U(rng));
        auto lhs = prod.eval(z);
        auto rhs = a.eval(z) * b.eval(z);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(rhs)));
        CHECK(prod.degree() == a.degree() + b.degree());
    }
}

TEST_CASE("degree of product coefficients are exact convolutions") {
    Polynomial a{1.0, -2.0, 3.0};
    Polynomial b{0.5, 4.0};
    Polynomial p = a * b;
    std::vector<double> expect{0.5, 3.0, -6.5, 12.0};
    REQUIRE(p.degree() == 3);
    for (int k = 0; k <= 3; ++k) CHECK(p[k] == Catch::Approx(expect[k]).epsilon(1e-12));
}

TEST_CASE("poly_roots on factored forms") {
    {
        ComplexRootSet rs = poly_roots(Polynomial{-1.0, 0.0, 1.0});  // x^2 - 1
        REQUIRE(rs.count_with_multiplicity() == 2);
        std::vector<double> re;
        for (auto z : rs.roots) re.push_back(z.real());
        std::sort(re.begin(), re.end());
        CHECK(re[0] == Catch::Approx(-1.0).margin(1e-12));
        CHECK(re[1] == Catch::Approx(1.0).margin(1e-12));
    }
    {
        ComplexRootSet rs = poly_roots(Polynomial{1.5, 0.5});  // btilde of F1
        REQUIRE(rs.count_with_multiplicity() == 1);
        CHECK(std::abs(rs.roots[0] - Complex(-3.0, 0.0)) < 1e-12);
    }
    {
        ComplexRootSet rs = poly_roots(Polynomial{1.0, 0.0, 1.0});  // x^2 + 1
        REQUIRE(rs.count_with_multiplicity() == 2);
        CHECK(std::abs(rs.roots[0].imag()) == Catch::Approx(1.0).margin(1e-12));
        CHECK(std::abs(rs.roots[0].real()) < 1e-12);
    }
    CHECK_THROWS_AS(poly_roots(Polynomial{2.0}), std::domain_error);
}

TEST_CASE("poly_roots recovers planted roots in the unit disk") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        int deg = 2 + int(rng() % 11);  // <= 12
        std::vector<Complex> planted;
        Polynomial p{1.0};
        int k = 0;
        while (k < deg) {
            if (deg - k >= 2 && (rng() & 1)) {
                double re = 0.7 * U(rng), im = 0.7 * std::fabs(U(rng)) + 0.05;
                planted.push_back(Complex(re, im));
                planted.push_back(Complex(re, -im));
                p = p * Polynomial{re * re + im * im, -2.0 * re, 1.0};
                k += 2;
            } else {
                double r = 0.9 * U(rng);
                planted.push_back(Complex(r, 0.0));
                p = p * Polynomial{-r, 1.0};
                k += 1;
            }
        }
        ComplexRootSet rs = poly_roots(p);
        REQUIRE(rs.count_with_multiplicity() == deg);
        for (Complex want : planted) {
            double best = 1e9;
            for (Complex got : rs.roots) best = std::min(best, std::abs(got - want));
            CHECK(best < 1e-8);
        }
        for (Complex got : rs.roots)
            CHECK(root_residual(p, got) <= root_residual_bound(p, got));
    }
}

TEST_CASE("root clustering reports multiplicity") {
    Polynomial dbl = Polynomial{-0.5, 1.0} * Polynomial{-0.5, 1.0} * Polynomial{2.0, 1.0};
    ComplexRootSet rs = poly_roots(dbl);
    CHECK(rs.count_with_multiplicity() == 3);
}

TEST_CASE("bessel_j_small values") {
    CHECK(std::abs(bessel_j_small(0.5, Complex(0.0, 0.0)) - 1.0) < 1e-15);
    // j_{1/2}(z) = sin(z)/z vanishes at pi
    CHECK(std::abs(bessel_j_small(0.5, std::numbers::pi)) < 1e-12);
    // first zero of J_0
    CHECK(std::abs(bessel_j_small(0.0, 2.404825557695773)) < 1e-9);
}

TEST_CASE("normalized bessel bounded by one on the real line") {
    for (double alpha : {0.0, 0.5, 2.0, 4.0})
        for (int i = 0; i <= 100; ++i) {
            double z = 20.0 * i / 100.0;
            CHECK(std::abs(bessel_j_small(alpha, z)) <= 1.0 + 1e-12);
        }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "exjacobi/asympt.hpp"
#include "exjacobi/spectra.hpp"

using namespace exjacobi;

namespace {
const ExceptionalFamily& f1() {
    static ExceptionalFamily fam = build_family({3.0, 0.0}, {SeedKind::TypeI, 1});
    return fam;
}
}  // namespace

TEST_CASE("sym_eigenvalues on known matrices") {
    {
        BandedSymMatrix d(5, 0);
        double vals[5] = {3.0, -1.0, 0.5, 2.0, -4.0};
        for (int i = 0; i < 5; ++i) d.set_entry(i, i, vals[i]);
        auto ev = sym_eigenvalues(d, 5);
        std::vector<double> want{-4.0, -1.0, 0.5, 2.0, 3.0};
        for (int i = 0; i < 5; ++i) CHECK(ev[i] == Catch::Approx(want[i]));
    }
    {
        BandedSymMatrix m(2, 1);
        m.set_entry(0, 1, 1.0);
        auto ev = sym_eigenvalues(m, 2);
        CHECK(ev[0] == Catch::Approx(-1.0));
        CHECK(ev[1] == Catch::Approx(1.0));
    }
    {
        // Legendre tridiagonal: eigenvalues are the zeros of q_8
        ExceptionalFamily cl = make_classical_family({0.0, 0.0});
        StandardRecurrence sr = standard_recurrence(cl, 10);
        auto ev = sym_eigenvalues(sr.matrix(8), 8);
        Polynomial p8 = jacobi_polynomial(8, {0.0, 0.0});
        auto roots = real_roots_in(p8, -1.0, 1.0);
        REQUIRE(roots.size() == 8);
        for (int i = 0; i < 8; ++i) CHECK(std::fabs(ev[i] - roots[i]) <= 1e-10);
    }
}

TEST_CASE("average characteristic polynomial zeros") {
    {
        // 3x3: eigenvalues match the expanded characteristic polynomial roots
        BandedSymMatrix me = build_Me(f1(), 3);
        auto ev = sym_eigenvalues(me, 3);
        double u00 = me.entry(0, 0), u01 = me.entry(0, 1), u02 = me.entry(0, 2);
        double u11 = me.entry(1, 1), u12 = me.entry(1, 2), u22 = me.entry(2, 2);
        // det(zI - M) = z^3 - tr z^2 + m2 z - det
        double tr = u00 + u11 + u22;
        double m2 = u00 * u11 - u01 * u01 + u00 * u22 - u02 * u02 + u11 * u22 - u12 * u12;
        double det = u00 * (u11 * u22 - u12 * u12) - u01 * (u01 * u22 - u12 * u02) +
                     u02 * (u01 * u12 - u11 * u02);
        Polynomial chi{-det, m2, -tr, 1.0};
        auto roots = real_roots_in(chi, -10.0, 10.0);
        REQUIRE(roots.size() == 3);
        for (int i = 0; i < 3; ++i) CHECK(std::fabs(roots[i] - ev[i]) <= 1e-10);
    }
    {
        // classical: z_i = xi_i and y_i = z_i
        ExceptionalFamily cl = make_classical_family({0.0, 0.0});
        AvgCharZeros ac = avg_char_poly_zeros(cl, 12);
        StandardRecurrence sr = standard_recurrence(cl, 14);
        auto xi = sym_eigenvalues(sr.matrix(12), 12);
        REQUIRE(ac.z.size() == 12);
        CHECK(ac.z_out_of_range.empty());
        for (int i = 0; i < 12; ++i) {
            CHECK(std::fabs(ac.z.points[i] - xi[i]) <= 1e-10);
            CHECK(std::fabs(ac.y_in_range[i] - ac.z.points[i]) <= 1e-9);
        }
    }
    {
        // F1 at n = 100: out-of-range eigenvalues are rare (<= 2 of 100)
        AvgCharZeros ac = avg_char_poly_zeros(f1(), 100);
        CHECK(ac.z_out_of_range.size() <= 2);
        // preimages invert Q
        Polynomial Q = q_primitive(f1());
        for (std::size_t i = 0; i < ac.y_in_range.size(); i += 11)
            CHECK(Q(ac.y_in_range[i]) == Catch::Approx(ac.z.points[i]).margin(1e-9));
    }
}

TEST_CASE("determinantal oracle matches the truncated determinant") {
    BandedSymMatrix me = build_Me(f1(), 3);
    const std::complex<double> probes[5] = {{2.0, 0.0}, {0.5, 0.0}, {-1.0, 0.0}, {3.7, 0.0}, {1.0, 1.0}};
    for (int N = 1; N <= 2; ++N) {
        for (auto z : probes) {
            DeterminantalResult r = determinantal_oracle(f1(), N, z);
            std::complex<double> det = char_poly_det(me, N, z);
            CHECK(std::abs(r.value - det) <= 1e-4 * std::abs(det));
        }
    }
    // normalization: c(N) * N! stays within 1e-6 of 1 for N = 2
    DeterminantalResult r2 = determinantal_oracle(f1(), 2, {0.0, 0.0});
    CHECK(std::fabs(r2.c_deviation) <= 1e-6);
    // N = 1: E(z - Q) = z - u_{0,0}
    RecurrenceTable t = recurrence_coeffs(f1(), 1);
    DeterminantalResult r1 = determinantal_oracle(f1(), 1, {2.0, 0.0});
    CHECK(std::abs(r1.value - (2.0 - t.at(0, 0))) <= 1e-10);
    // N = 3 agrees too
    DeterminantalResult r3 = determinantal_oracle(f1(), 3, {2.0, 0.0});
    CHECK(std::abs(r3.value - char_poly_det(me, 3, {2.0, 0.0})) <= 1e-4 * std::abs(char_poly_det(me, 3, {2.0, 0.0})));
    CHECK_THROWS_AS(determinantal_oracle(f1(), 4, {2.0, 0.0}), std::domain_error);
}

TEST_CASE("empirical measure basics") {
    EmpiricalMeasure m({0.5, -0.5, 0.2});
    CHECK(m.size() == 3);
    CHECK(m.points.front() == -0.5);  // sorted on construction
    CHECK(m.moment(2) == Catch::Approx((0.25 + 0.25 + 0.04) / 3.0));
    CHECK(m.count_in(0.0, 1.0) == 2);
}

TEST_CASE("christoffel density integrates to one") {
    ChristoffelMeasure cm{&f1(), 12};
    FamilyQuadrature fq = make_family_quadrature(f1(), 256);
    // density already includes W; integrate against plain Gauss-Jacobi weights
    QuadratureRule rule = gauss_jacobi_rule(256, f1().weight_params());
    double mass = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double x = rule.nodes[i];
        JacobiParams wp = f1().weight_params();
        double w_classical = std::pow(1.0 - x, wp.alpha) * std::pow(1.0 + x, wp.beta);
        mass += rule.weights[i] * cm.density(x) / w_classical;
    }
    CHECK(mass == Catch::Approx(1.0).margin(1e-8));
    (void)fq;
}

TEST_CASE("christoffel measure") {
    // mass is 1 for every n
    auto mom1 = christoffel_moments(f1(), 1, 1);
    CHECK(mom1[0] == Catch::Approx(1.0).margin(1e-8));
    // n = 1: int Q dmu_1 = u_{0,0}
    RecurrenceTable t = recurrence_coeffs(f1(), 1);
    CHECK(mom1[1] == Catch::Approx(t.at(0, 0)).margin(1e-10));

    auto mom60 = christoffel_moments(f1(), 60, 2);
    CHECK(mom60[0] == Catch::Approx(1.0).margin(1e-8));

    CHECK(christoffel_hypothesis_ok(f1()));
}

TEST_CASE("equilibrium moments") {
    auto mx = equilibrium_moments(Polynomial::identity(), 2);
    CHECK(mx[1] == Catch::Approx(0.0).margin(1e-15));
    CHECK(mx[2] == Catch::Approx(0.5).epsilon(1e-14));
    auto mq = equilibrium_moments(q_primitive(f1()), 1);
    CHECK(mq[1] == Catch::Approx(limit_coeffs(f1())[0]).epsilon(1e-14));  // = U_0
}

TEST_CASE("moment convergence toward the equilibrium measure") {
    Polynomial Q = q_primitive(f1());
    auto eq = equilibrium_moments(Q, 6);
    auto m50 = christoffel_moments(f1(), 50, 6);
    auto m400 = christoffel_moments(f1(), 400, 6);
    for (int l = 1; l <= 6; ++l)
        CHECK(std::fabs(m400[l] - eq[l]) < std::fabs(m50[l] - eq[l]));
}

TEST_CASE("trace gap experiment") {
    {
        ExceptionalFamily cl = make_classical_family({0.0, 0.0});
        CHECK(trace_gap_experiment(cl, 1, 40) <= 1e-9);
    }
    TraceGapExperiment ex(f1(), 200);
    for (int l = 1; l <= 3; ++l) {
        double g50 = ex.gap(l, 50), g200 = ex.gap(l, 200);
        CHECK(g200 < g50);
        CHECK(g200 < 0.05);
    }
    // the banded-trace route agrees with the eigenvalue route
    BandedSymMatrix me = BandedSymMatrix::from_entries(
        60, ex.table().L, [&](int i, int j) { return ex.table().at(i, j - i); });
    auto ev = sym_eigenvalues(me, 60);
    double s3 = 0.0;
    for (double z : ev) s3 += z * z * z;
    CHECK(std::fabs(banded_power_trace(me.truncate(60), 3) - s3) <= 1e-8 * std::max(1.0, std::fabs(s3)));
}

TEST_CASE("zero-counting vs average-characteristic moments shrink") {
    // |int Q^l d nu~_n - int Q^l d mu~_n| decreases from n = 50 to n = 400
    Polynomial Q = q_primitive(f1());
    auto gap_at = [&](int n) {
        AvgCharZeros ac = avg_char_poly_zeros(f1(), n);
        auto rz = regular_zeros(f1(), n);
        double worst = 0.0;
        for (int l = 1; l <= 4; ++l) {
            double nu = 0.0;
            for (double z : ac.z.points) nu += std::pow(z, l);
            nu /= ac.z.size();
            double mu = 0.0;
            for (double x : rz) mu += std::pow(Q(x), l);
            mu /= rz.size();
            worst = std::max(worst, std::fabs(nu - mu));
        }
        return worst;
    };
    CHECK(gap_at(400) < gap_at(50));
}

TEST_CASE("discrepancy machinery") {
    {
        // uniform grid: sup discrepancy 1/n
        const int n = 37;
        std::vector<double> ang(n);
        for (int i = 0; i < n; ++i) ang[i] = (i + 0.5) * std::numbers::pi / n;
        CHECK(sup_discrepancy(ang) <= 1.0 / n + 1e-12);
    }
    {
        // all points at one angle: discrepancy 1
        std::vector<double> ang(10, 0.0);
        CHECK(sup_discrepancy(ang) == Catch::Approx(1.0));
    }
    {
        // interval count form
        std::vector<double> ang{0.1, 0.2, 0.3, 2.0};
        double d = interval_discrepancy(ang, 0.05, 0.35);
        CHECK(d == Catch::Approx(std::fabs(3.0 - 0.3 / std::numbers::pi * 4.0) / 4.0));
    }
    {
        // Legendre zeros obey the Erdos-Turan bound with A(n) = 4^n / binom(2n,n)
        const int n = 50;
        auto zs = gauss_jacobi_rule(n, {0.0, 0.0}).nodes;  // = zeros of P_n
        REQUIRE(static_cast<int>(zs.size()) == n);
        double d = sup_discrepancy(angles_from_points(zs));
        double logA = n * std::log(4.0) -
                      (std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0));
        double bound = 8.0 / std::log(3.0) * std::sqrt(logA / n);
        CHECK(d < bound);
    }
}

// Command-line driver: loads a family + experiment config (JSON), runs the
// named experiment, writes one CSV and one JSON summary per run.
//
// Exit codes: 0 ok, 1 config error, 2 family validation error, 3 numerical
// failure (the message names the failing invariant).

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exjacobi/asympt.hpp"
#include "exjacobi/config.hpp"
#include "exjacobi/csv.hpp"
#include "exjacobi/darboux.hpp"
#include "exjacobi/opmatrix.hpp"
#include "exjacobi/selfinv.hpp"
#include "exjacobi/spectra.hpp"

using namespace exjacobi;
using nlohmann::json;

namespace {

struct RunContext {
    ExperimentConfig cfg;
    ExceptionalFamily fam;
    std::filesystem::path outdir;

    json checks = json::array();
    bool all_pass = true;

    void check(const std::string& name, double value, double threshold, bool pass) {
        checks.push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}});
        if (!pass) all_pass = false;
    }

    std::ofstream open_csv(const std::string& experiment) const {
        std::filesystem::create_directories(outdir);
        std::ofstream out(outdir / (experiment + ".csv"));
        if (!out) throw NumericalError("cannot open output CSV in " + outdir.string());
        return out;
    }

    void write_summary(const std::string& experiment) const {
        json j;
        j["experiment"] = experiment;
        j["family"] = {{"seed_type", seed_kind_name(cfg.family.kind)},
                       {"alpha", cfg.family.alpha},
                       {"beta", cfg.family.beta},
                       {"m", cfg.family.m}};
        j["seed"] = cfg.seed;
        j["checks"] = checks;
        j["all_pass"] = all_pass;
        std::ofstream out(outdir / (experiment + "_summary.json"));
        out << j.dump(2) << "\n";
    }
};

void run_family_check(RunContext& ctx) {
    const ExceptionalFamily& fam = ctx.fam;
    auto out = ctx.open_csv("family-check");
    csv_row(out, "check", "value", "threshold", "pass");
    auto emit = [&](const std::string& name, double value, double thr) {
        bool ok = value <= thr;
        csv_row(out, name, value, thr, int(ok));
        ctx.check(name, value, thr, ok);
    };
    emit("riccati_residual", fam.riccati_residual, 1e-8);
    emit("bw_residual", fam.bw_residual, 1e-10);
    emit("lambda_closed_form_gap", std::fabs(fam.lambda_tilde - fam.lambda_tilde_closed_form),
         1e-8 * (1.0 + std::fabs(fam.lambda_tilde)));

    FamilyQuadrature fq = make_family_quadrature(fam, 512);
    auto tab = orthonormal_values_table(fam, 25, fq.nodes);
    double worst = 0.0;
    for (int i = 0; i <= 25; ++i)
        for (int j = i; j <= 25; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < fq.nodes.size(); ++t) s += fq.weights[t] * tab[i][t] * tab[j][t];
            worst = std::max(worst, std::fabs(s - (i == j ? 1.0 : 0.0)));
        }
    emit("orthonormality_defect_25", worst, 1e-9);

    auto tab40 = orthonormal_values_table(fam, 40, fq.nodes);
    double sworst = 0.0;
    for (int k = 0; k <= 40; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t < fq.nodes.size(); ++t) s += fq.weights[t] * tab40[k][t] * tab40[k][t];
        sworst = std::max(sworst, std::fabs(s - 1.0));
    }
    emit("sigma_formula_rel_err_40", sworst, 1e-8);

    double iworst = 0.0;
    for (int n = 0; n <= 20; ++n) iworst = std::max(iworst, intertwining_check(fam, n));
    emit("intertwining_residual_20", iworst, 1e-7);

    PartnerCoefficients pc = partner_coefficients(fam);
    double oworst = 0.0;
    for (int n = 0; n <= 20; ++n)
        for (int j = 1; j <= 20; ++j) {
            double x = 0.95 * std::cos((2.0 * j - 1.0) * std::numbers::pi / 40.0);
            if (std::fabs(fam.b(x)) < 1e-3) continue;
            double P = fam.exceptional(n, x);
            double dP = fam.exceptional_derivative(n, x, 1);
            double ddP = fam.exceptional_derivative(n, x, 2);
            double res = (1 - x * x) * ddP + pc.q_hat(x) * dP + pc.r_hat(x) * P - fam.lambda_n(n) * P;
            double scale = std::fabs(fam.lambda_n(n) * P) + std::fabs(pc.r_hat(x) * P) + 1.0;
            oworst = std::max(oworst, std::fabs(res) / scale);
        }
    emit("partner_ode_residual_20", oworst, 1e-7);
}

void run_moments(RunContext& ctx) {
    if (!christoffel_hypothesis_ok(ctx.fam))
        std::cerr << "warning: alpha+eps1 or beta+eps2 below -1/2; the moment convergence "
                     "hypothesis does not hold for this family\n";
    Polynomial Q = q_primitive(ctx.fam);
    auto eq = equilibrium_moments(Q, ctx.cfg.l_max);
    std::vector<std::vector<double>> mu;
    for (int n : ctx.cfg.n_list) mu.push_back(christoffel_moments(ctx.fam, n, ctx.cfg.l_max));
    auto out = ctx.open_csv("moments");
    write_moments_csv(out, ctx.cfg.n_list, ctx.cfg.l_max, mu, eq);
    for (int l = 1; l <= ctx.cfg.l_max; ++l) {
        double first = std::fabs(mu.front()[l] - eq[l]);
        double last = std::fabs(mu.back()[l] - eq[l]);
        // symmetric families have identically-zero odd moments; below the
        // quadrature floor there is nothing left to decrease
        ctx.check("moment_gap_decreases_l" + std::to_string(l), last, first,
                  last < first || last <= 1e-12);
    }
    ctx.check("mass_is_one", std::fabs(mu.back()[0] - 1.0), 1e-8, std::fabs(mu.back()[0] - 1.0) <= 1e-8);
}

void run_traces(RunContext& ctx) {
    int n_max = *std::max_element(ctx.cfg.n_list.begin(), ctx.cfg.n_list.end());
    int l_max = std::min(ctx.cfg.l_max, 6);
    TraceGapExperiment ex(ctx.fam, n_max);
    std::vector<std::tuple<int, int, double>> rows;
    for (int n : ctx.cfg.n_list)
        for (int l = 1; l <= l_max; ++l) rows.emplace_back(n, l, ex.gap(l, n));
    auto out = ctx.open_csv("traces");
    write_trace_csv(out, rows);
    for (int l = 1; l <= std::min(3, l_max); ++l) {
        double first = 0, last = 0;
        for (const auto& [n, ll, g] : rows) {
            if (ll != l) continue;
            if (n == ctx.cfg.n_list.front()) first = g;
            if (n == n_max) last = g;
        }
        ctx.check("trace_gap_decreases_l" + std::to_string(l), last, first,
                  last < first || last <= 1e-12);
        ctx.check("trace_gap_below_0.02_l" + std::to_string(l), last, 0.02, last < 0.02);
    }
}

void run_zeros(RunContext& ctx) {
    std::vector<std::pair<int, double>> rows;
    bool counts_ok = true;
    for (int n : ctx.cfg.n_list) {
        ZeroSplit zs = zero_split(ctx.fam, n);
        if (n >= 20 && static_cast<int>(zs.exceptional.size()) != ctx.fam.codim) counts_ok = false;
        rows.emplace_back(n, exceptional_zero_gap(ctx.fam, n));
    }
    auto out = ctx.open_csv("zeros");
    write_hausdorff_csv(out, rows);
    ctx.check("exceptional_count_matches_codim", counts_ok ? 0.0 : 1.0, 0.0, counts_ok);
    ctx.check("gap_decreases", rows.back().second, rows.front().second,
              rows.back().second < rows.front().second);
    for (const auto& [n, g] : rows)
        if (n == 200) ctx.check("gap_at_200_below_1e-2", g, 1e-2, g < 1e-2);
}

void run_discrepancy(RunContext& ctx) {
    double C = fit_c2_constant(ctx.fam, ctx.cfg.n_list.front());
    std::vector<std::tuple<int, double, double>> rows;
    for (int n : ctx.cfg.n_list) {
        DiscrepancyResult d = regular_zero_discrepancy(ctx.fam, n, C);
        rows.emplace_back(n, d.value, d.bound);
        if (n != ctx.cfg.n_list.front())
            ctx.check("within_bound_n" + std::to_string(n), d.value, d.bound, d.value <= d.bound);
    }
    auto out = ctx.open_csv("discrepancy");
    write_regular_zero_discrepancy_csv(out, rows);
    auto rz = regular_zeros(ctx.fam, ctx.cfg.n_list.back());
    double m2 = 0.0;
    for (double x : rz) m2 += x * x;
    m2 /= rz.size();
    ctx.check("second_moment_near_half", std::fabs(m2 - 0.5), 0.02, std::fabs(m2 - 0.5) < 0.02);
}

void run_ratio(RunContext& ctx) {
    std::vector<std::tuple<int, Complex, double>> rows;
    for (auto z : ctx.cfg.z_list) {
        Complex limit = joukowski_inverse_inner(z);
        double first = -1, last = -1;
        for (int n : ctx.cfg.n_list) {
            double err = std::abs(ratio_asymptotics(ctx.fam, z, n) - limit);
            rows.emplace_back(n, z, err);
            if (first < 0) first = err;
            last = err;
        }
        ctx.check("ratio_error_decreases_z" + csv_num(z), last, first, last < first);
    }
    auto out = ctx.open_csv("ratio");
    write_ratio_csv(out, rows);
}

void run_mehler_heine(RunContext& ctx) {
    std::vector<std::tuple<int, Complex, Complex, Complex, double>> rows;
    for (int n : ctx.cfg.n_list)
        for (auto z : ctx.cfg.z_list) {
            MehlerHeine m = mehler_heine(ctx.fam, z, n);
            rows.emplace_back(n, z, m.scaled, m.limit, m.rel_err);
            if (n == 500)
                ctx.check("mh_rel_err_n500_z" + csv_num(z), m.rel_err, 1e-2, m.rel_err <= 1e-2);
        }
    auto out = ctx.open_csv("mehler-heine");
    write_mh_csv(out, rows);
}

void run_selfinv_sweep(RunContext& ctx) {
    StatementInterval s = statement_interval(ctx.fam);
    std::mt19937_64 rng(ctx.cfg.seed);
    std::uniform_real_distribution<double> U(s.lo - 1.0, s.hi + 1.0);
    std::vector<std::tuple<double, double, double, int, int, int>> rows;
    int mismatches = 0, disk_bad = 0;
    for (int t = 0; t < 100; ++t) {
        double lam = U(rng);
        if (std::min(std::fabs(lam - s.lo), std::fabs(lam - s.hi)) < 1e-9) continue;
        SelfInversivePoly p = build_self_inversive(ctx.fam, lam);
        bool inside = lam >= s.lo && lam <= s.hi;
        bool circ = circle_zero_test(p);
        int nin = roots_inside_disk(p);
        rows.emplace_back(lam, s.lo, s.hi, int(inside), int(circ), nin);
        if (circ != inside) ++mismatches;
        if (!inside && nin != p.L) ++disk_bad;
    }
    auto out = ctx.open_csv("selfinv-sweep");
    write_selfinv_csv(out, rows);
    ctx.check("classification_mismatches", mismatches, 0.0, mismatches == 0);
    ctx.check("outside_lambda_L_roots_inside_disk", disk_bad, 0.0, disk_bad == 0);
}

void run_spectrum(RunContext& ctx) {
    StatementInterval s = statement_interval(ctx.fam);
    Polynomial Q = q_primitive(ctx.fam, QConstantMode::MinusU0);
    auto out = ctx.open_csv("spectrum");
    csv_row(out, "n", "min_eig", "max_eig", "lo", "hi", "hausdorff_to_symbol_grid");
    for (int n : ctx.cfg.n_list) {
        if (n < 2 * ctx.fam.L + 1) continue;
        auto ev = toeplitz_section_spectrum(ctx.fam, n);
        std::vector<Complex> A, B;
        for (double v : ev) A.emplace_back(v, 0.0);
        for (int j = 0; j < n; ++j)
            B.emplace_back(Q(std::cos(std::numbers::pi * j / (n - 1.0))), 0.0);
        double H = hausdorff_distance(A, B);
        csv_row(out, n, ev.front(), ev.back(), s.lo, s.hi, H);
        if (n == ctx.cfg.n_list.back()) {
            bool contained = ev.front() >= s.lo - 1e-6 && ev.back() <= s.hi + 1e-6;
            ctx.check("sections_confined", contained ? 0.0 : 1.0, 0.0, contained);
            ctx.check("sections_fill_interval_hausdorff", H, 0.05, H < 0.05);
        }
    }
}

void run_eq34_oracle(RunContext& ctx) {
    BandedSymMatrix me = build_Me(ctx.fam, 3);
    auto out = ctx.open_csv("eq34-oracle");
    csv_row(out, "N", "z", "oracle_value", "det_value", "rel_err");
    std::vector<Complex> probes = ctx.cfg.z_list;
    while (probes.size() < 5) probes.push_back(Complex(0.6 * probes.size() - 1.3, 0.0));
    double worst = 0.0;
    for (int N = 1; N <= 2; ++N)
        for (auto z : probes) {
            DeterminantalResult r = determinantal_oracle(ctx.fam, N, z);
            Complex det = char_poly_det(me, N, z);
            double rel = std::abs(r.value - det) / std::abs(det);
            worst = std::max(worst, rel);
            csv_row(out, N, z, r.value, det, rel);
        }
    ctx.check("eq34_rel_err", worst, 1e-4, worst <= 1e-4);
}

using Runner = std::function<void(RunContext&)>;

const std::map<std::string, Runner>& registry() {
    static const std::map<std::string, Runner> reg = {
        {"family-check", run_family_check}, {"moments", run_moments},
        {"traces", run_traces},             {"zeros", run_zeros},
        {"discrepancy", run_discrepancy},   {"ratio", run_ratio},
        {"mehler-heine", run_mehler_heine}, {"selfinv-sweep", run_selfinv_sweep},
        {"spectrum", run_spectrum},         {"eq34-oracle", run_eq34_oracle},
    };
    return reg;
}

void print_usage_experiments(std::ostream& os) {
    os << "registered experiments:";
    for (const auto& [name, _] : registry()) os << " " << name;
    os << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exceptional Jacobi multiplication-operator experiments"};
    std::string config_path, experiment_override, out_dir = ".";
    long long seed_override = -1;
    app.add_option("--config", config_path, "experiment config JSON")->required();
    app.add_option("--experiment", experiment_override, "experiment name (overrides config)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed_override, "seed for randomized sweeps (overrides config)");
    CLI11_PARSE(app, argc, argv);

    RunContext ctx;
    try {
        ctx.cfg = load_experiment_config(config_path);
        if (!experiment_override.empty()) ctx.cfg.experiment = experiment_override;
        if (seed_override >= 0) ctx.cfg.seed = static_cast<unsigned long long>(seed_override);
        if (!ctx.cfg.output.empty() && out_dir == ".") out_dir = ctx.cfg.output;
        ctx.outdir = out_dir;
        if (!registry().count(ctx.cfg.experiment)) {
            std::cerr << "unknown experiment: \"" << ctx.cfg.experiment << "\"\n";
            print_usage_experiments(std::cerr);
            return 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        ctx.fam = build_family(ctx.cfg.family);
    } catch (const FamilyError& e) {
        std::cerr << "family validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "family validation error: " << e.what() << "\n";
        return 2;
    }

    try {
        registry().at(ctx.cfg.experiment)(ctx);
        ctx.write_summary(ctx.cfg.experiment);
        std::cout << (ctx.all_pass ? "all checks passed" : "some checks FAILED") << " ("
                  << ctx.cfg.experiment << ")\n";
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

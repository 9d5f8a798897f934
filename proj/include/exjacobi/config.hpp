#pragma once

#include <complex>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "exjacobi/darboux.hpp"

namespace exjacobi {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Family document:
/// {"seed_type": "I"|"II"|"III", "alpha": num, "beta": num, "m": int,
///  "s_coeffs": [num...] (default [1]), "sign_normalize": bool (default true)}
struct FamilySpec {
    SeedKind kind = SeedKind::TypeI;
    double alpha = 0.0, beta = 0.0;
    int m = 1;
    std::vector<double> s_coeffs{1.0};
    bool sign_normalize = true;
};

inline FamilySpec family_spec_from_json(const nlohmann::json& j) {
    FamilySpec f;
    try {
        std::string t = j.at("seed_type").get<std::string>();
        if (t == "I")
            f.kind = SeedKind::TypeI;
        else if (t == "II")
            f.kind = SeedKind::TypeII;
        else if (t == "III")
            f.kind = SeedKind::TypeIII;
        else
            throw ConfigError("seed_type must be \"I\", \"II\" or \"III\"");
        f.alpha = j.at("alpha").get<double>();
        f.beta = j.at("beta").get<double>();
        f.m = j.at("m").get<int>();
        if (j.contains("s_coeffs")) f.s_coeffs = j["s_coeffs"].get<std::vector<double>>();
        if (j.contains("sign_normalize")) f.sign_normalize = j["sign_normalize"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad family spec: ") + e.what());
    }
    return f;
}

inline ExceptionalFamily build_family(const FamilySpec& f) {
    SeedChoice seed;
    seed.kind = f.kind;
    seed.m = f.m;
    seed.s = Polynomial(f.s_coeffs);
    return build_family(JacobiParams{f.alpha, f.beta}, seed, f.sign_normalize);
}

/// Experiment document:
/// {"family": {...}, "experiment": name, "n_list": [int...], "l_max": int,
///  "z_list": [num or [re,im] ...], "output": path, "seed": int}
struct ExperimentConfig {
    FamilySpec family;
    std::string experiment;
    std::vector<int> n_list{50, 100, 200, 400};
    int l_max = 6;
    std::vector<std::complex<double>> z_list{{2.0, 0.0}};
    std::string output;
    unsigned long long seed = 12345;
};

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        c.family = family_spec_from_json(j.at("family"));
        if (j.contains("experiment")) c.experiment = j["experiment"].get<std::string>();
        if (j.contains("n_list")) c.n_list = j["n_list"].get<std::vector<int>>();
        if (j.contains("l_max")) c.l_max = j["l_max"].get<int>();
        if (j.contains("z_list")) {
            c.z_list.clear();
            for (const auto& e : j["z_list"]) {
                if (e.is_number())
                    c.z_list.emplace_back(e.get<double>(), 0.0);
                else if (e.is_array() && e.size() == 2)
                    c.z_list.emplace_back(e[0].get<double>(), e[1].get<double>());
                else
                    throw ConfigError("z_list entries must be numbers or [re, im] pairs");
            }
        }
        if (j.contains("output")) c.output = j["output"].get<std::string>();
        if (j.contains("seed")) c.seed = j["seed"].get<unsigned long long>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad experiment config: ") + e.what());
    }
    return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return experiment_config_from_json(j);
}

}  // namespace exjacobi

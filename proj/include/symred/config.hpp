#pragma once

// Flat key-value experiment configs: one `key = value` pair per line,
// `#` comments, keys namespaced as model.*, run.*, output.*.

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "symred/models.hpp"

namespace symred {

enum class RunMode { Path, Ensemble, Convergence, Verify };

struct ExperimentConfig {
    models::ModelConfig model;
    RunMode mode = RunMode::Path;
    int paths = 1000;
    std::vector<int> refinements = {100, 1000, 10000};
    std::string out_dir = ".";
    bool emit_svg = false;
    int workers = 0; // 0 = unset (CLI fills from flag/env, default 1)
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw BadConfig("bad numeric list entry: " + item);
    }
    return out;
}

inline Vector3 parse_vec3(const std::string& s) {
    const auto v = parse_list(s);
    if (v.size() != 3) throw BadConfig("expected 3 components: " + s);
    return Vector3(v[0], v[1], v[2]);
}

} // namespace detail

inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw BadConfig("line " + std::to_string(lineno) + ": expected key = value");
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    return kv;
}

inline ExperimentConfig parse_experiment(std::istream& is) {
    const auto kv = parse_key_values(is);
    ExperimentConfig cfg;
    for (const auto& [key, value] : kv) {
        try {
            if (key == "model.name") {
                cfg.model.name = value;
                const auto names = models::model_names();
                if (std::find(names.begin(), names.end(), value) == names.end())
                    throw BadConfig("unknown model: " + value);
            } else if (key == "model.lambda") {
                const auto v = detail::parse_list(value);
                if (v.size() == 3)
                    cfg.model.lambda = Vector3(v[0], v[1], v[2]).asDiagonal();
                else if (v.size() == 9)
                    cfg.model.lambda = Eigen::Map<const Matrix3>(v.data()).transpose();
                else
                    throw BadConfig("model.lambda takes 3 (diagonal) or 9 values");
            } else if (key == "model.sigma") {
                cfg.model.sigma = std::stod(value);
            } else if (key == "model.epsilon") {
                cfg.model.epsilon = std::stod(value);
            } else if (key == "model.T") {
                cfg.model.T = std::stod(value);
            } else if (key == "model.steps") {
                cfg.model.steps = std::stoi(value);
            } else if (key == "model.seed") {
                cfg.model.seed = std::stoull(value);
            } else if (key == "model.mu0") {
                cfg.model.mu0 = detail::parse_vec3(value);
            } else if (key == "model.g0") {
                cfg.model.g0 = lie::exp_so3(detail::parse_vec3(value)); // axis-angle
            } else if (key == "model.sphere_point") {
                cfg.model.sphere_point = detail::parse_vec3(value);
            } else if (key == "run.mode") {
                if (value == "path") cfg.mode = RunMode::Path;
                else if (value == "ensemble") cfg.mode = RunMode::Ensemble;
                else if (value == "convergence") cfg.mode = RunMode::Convergence;
                else if (value == "verify") cfg.mode = RunMode::Verify;
                else throw BadConfig("unknown run.mode: " + value);
            } else if (key == "run.paths") {
                cfg.paths = std::stoi(value);
            } else if (key == "run.refinements") {
                cfg.refinements.clear();
                for (double d : detail::parse_list(value))
                    cfg.refinements.push_back(static_cast<int>(d));
            } else if (key == "run.workers") {
                cfg.workers = std::stoi(value);
            } else if (key == "output.dir") {
                cfg.out_dir = value;
            } else if (key == "output.svg") {
                cfg.emit_svg = value == "true" || value == "1";
            } else {
                throw BadConfig("unknown key: " + key);
            }
        } catch (const BadConfig&) {
            throw;
        } catch (const std::exception& e) {
            throw BadConfig("key " + key + ": " + e.what());
        }
    }
    if (cfg.mode == RunMode::Ensemble && cfg.paths < 2)
        throw BadConfig("ensemble mode needs run.paths >= 2");
    if (cfg.mode == RunMode::Convergence) {
        if (cfg.refinements.size() < 3)
            throw BadConfig("convergence mode needs >= 3 refinements");
        const int finest = *std::max_element(cfg.refinements.begin(), cfg.refinements.end());
        for (int r : cfg.refinements)
            if (r < 1 || finest % r != 0)
                throw BadConfig("refinements must nest by integer factors");
    }
    return cfg;
}

} // namespace symred

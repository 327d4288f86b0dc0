#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace finsler {

/// Run configuration: flat key=value text with [sections]; every key has
/// a CLI flag override of the same name.
struct RunConfig {
    std::uint64_t seed = 42;
    std::string out_dir = "reports";
    std::string format = "json";

    int funk_nodes = 512;
    double funk_tol = 1e-8;
    double fd_base_step = 1e-2;
    double area_tol = 1e-7;
    double hamel_tol = 1e-6;
    int geodesic_steps = 1024;
    double geodesic_tol = 1e-6;
    std::uint64_t crofton_samples = 1000000;
    double crofton_sigmas = 4.0;
    double reduce_tol = 5e-3;
    int dual_samples = 1024;
    int reduce_surface_s = 12;
    int reduce_surface_t = 24;
    int reduce_fiber_alpha = 96;
    int reduce_fiber_beta = 96;
    std::vector<double> lambdas = {0.0, 0.5, 1.0, 2.0};
    std::vector<double> ts = {0.25, 0.5, 1.0, 2.0};

    void validate() const {
        if (funk_tol <= 0 || area_tol <= 0 || hamel_tol <= 0 || geodesic_tol <= 0 ||
            reduce_tol <= 0 || fd_base_step <= 0 || crofton_sigmas <= 0)
            throw std::invalid_argument("all tolerances must be positive");
        if (funk_nodes < 16 || funk_nodes % 2 != 0)
            throw std::invalid_argument("quadrature node counts must be even and >= 16");
        if (format != "json" && format != "csv")
            throw std::invalid_argument("format must be json or csv");
    }

    nlohmann::json snapshot() const {
        nlohmann::json j;
        j["seed"] = seed;
        j["out"] = out_dir;
        j["format"] = format;
        j["funk.nodes"] = funk_nodes;
        j["funk.tol"] = funk_tol;
        j["fd.base_step"] = fd_base_step;
        j["area.tol"] = area_tol;
        j["hamel.tol"] = hamel_tol;
        j["geodesic.steps"] = geodesic_steps;
        j["geodesic.tol"] = geodesic_tol;
        j["crofton.samples"] = crofton_samples;
        j["crofton.sigmas"] = crofton_sigmas;
        j["reduce.tol"] = reduce_tol;
        j["dual.samples"] = dual_samples;
        j["reduce.surface_s"] = reduce_surface_s;
        j["reduce.surface_t"] = reduce_surface_t;
        j["reduce.fiber_alpha"] = reduce_fiber_alpha;
        j["reduce.fiber_beta"] = reduce_fiber_beta;
        j["lambda.list"] = lambdas;
        j["t.list"] = ts;
        return j;
    }
};

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

/// key=value lines with optional [section] headers; '#' starts a comment.
inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line, section;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("malformed config line: " + line);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        kv[section.empty() ? key : section + "." + key] = value;
    }
    return kv;
}

inline void apply_config_map(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "seed")
            cfg.seed = std::stoull(value);
        else if (key == "out")
            cfg.out_dir = value;
        else if (key == "format")
            cfg.format = value;
        else if (key == "funk.nodes")
            cfg.funk_nodes = std::stoi(value);
        else if (key == "funk.tol")
            cfg.funk_tol = std::stod(value);
        else if (key == "fd.base_step")
            cfg.fd_base_step = std::stod(value);
        else if (key == "area.tol")
            cfg.area_tol = std::stod(value);
        else if (key == "hamel.tol")
            cfg.hamel_tol = std::stod(value);
        else if (key == "geodesic.steps")
            cfg.geodesic_steps = std::stoi(value);
        else if (key == "geodesic.tol")
            cfg.geodesic_tol = std::stod(value);
        else if (key == "crofton.samples")
            cfg.crofton_samples = std::stoull(value);
        else if (key == "crofton.sigmas")
            cfg.crofton_sigmas = std::stod(value);
        else if (key == "reduce.tol")
            cfg.reduce_tol = std::stod(value);
        else if (key == "dual.samples")
            cfg.dual_samples = std::stoi(value);
        else if (key == "reduce.surface_s")
            cfg.reduce_surface_s = std::stoi(value);
        else if (key == "reduce.surface_t")
            cfg.reduce_surface_t = std::stoi(value);
        else if (key == "reduce.fiber_alpha")
            cfg.reduce_fiber_alpha = std::stoi(value);
        else if (key == "reduce.fiber_beta")
            cfg.reduce_fiber_beta = std::stoi(value);
        else if (key == "lambda.list")
            cfg.lambdas = parse_double_list(value);
        else if (key == "t.list")
            cfg.ts = parse_double_list(value);
        else
            throw std::invalid_argument("unknown config key: " + key);
    }
}

inline RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    apply_config_map(cfg, parse_config_text(in));
    cfg.validate();
    return cfg;
}

}  // namespace finsler

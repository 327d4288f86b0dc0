#include <cstdint>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finsler/config.hpp"
#include "finsler/crofton.hpp"
#include "finsler/linalg.hpp"
#include "finsler/mesh.hpp"
#include "finsler/norms.hpp"
#include "finsler/report.hpp"
#include "finsler/reproduce.hpp"
#include "finsler/rng.hpp"

namespace {

using finsler::ExperimentReport;
using finsler::RunConfig;

/// Registers --config plus one flag per config key; returns a callback
/// that folds file values and flag overrides (flags win) into cfg.
struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string> overrides;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (key=value with [sections])");
        static const char* keys[] = {
            "seed",          "out",           "format",          "funk.nodes",
            "funk.tol",      "fd.base_step",  "area.tol",        "hamel.tol",
            "geodesic.steps","geodesic.tol",  "crofton.samples", "crofton.sigmas",
            "reduce.tol",    "dual.samples",  "reduce.surface_s","reduce.surface_t",
            "reduce.fiber_alpha", "reduce.fiber_beta", "lambda.list", "t.list"};
        for (const char* key : keys) {
            std::string k = key;
            cmd->add_option_function<std::string>(
                "--" + k, [this, k](const std::string& v) { overrides[k] = v; },
                "override config key " + k);
        }
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) cfg = finsler::load_config(config_path);
        finsler::apply_config_map(cfg, overrides);
        cfg.validate();
        return cfg;
    }
};

void write_report_csv(const std::filesystem::path& dir, const ExperimentReport& rep) {
    std::ofstream out(dir / (rep.id + ".csv"));
    out << "inputs,computed,oracle,abs_err,rel_err,verdict\n";
    for (const auto& row : rep.rows) {
        out << finsler::csv_field(row.inputs.dump()) << ',' << finsler::format_double(row.computed)
            << ',' << finsler::format_double(row.oracle) << ','
            << finsler::format_double(row.abs_err) << ',' << finsler::format_double(row.rel_err)
            << ',' << (row.pass ? "pass" : "fail") << '\n';
    }
}

int emit(const RunConfig& cfg, ExperimentReport rep) {
    rep.config = cfg.snapshot();
    std::filesystem::path dir(cfg.out_dir);
    rep.write(dir);
    if (cfg.format == "csv") write_report_csv(dir, rep);
    std::cout << rep.id << ": " << (rep.overall_pass() ? "pass" : "fail") << '\n';
    return rep.overall_pass() ? 0 : 1;
}

/// "diag:1,1.9" or "phi-lambda:2"; throws CLI::ValidationError with the
/// offending column on malformed input.
struct NormSpec {
    std::string kind;
    std::vector<double> values;
};

NormSpec parse_norm_spec(const std::string& spec) {
    auto fail = [&](std::size_t col, const std::string& what) -> NormSpec {
        throw CLI::ValidationError("check-norm",
                                   "malformed matrix spec at line 1, column " +
                                       std::to_string(col + 1) + ": " + what);
    };
    auto colon = spec.find(':');
    if (colon == std::string::npos) return fail(spec.size(), "expected ':'");
    NormSpec out;
    out.kind = spec.substr(0, colon);
    if (out.kind != "diag" && out.kind != "phi-lambda")
        return fail(0, "unknown kind '" + out.kind + "' (expected diag or phi-lambda)");
    std::size_t pos = colon + 1;
    while (pos < spec.size()) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(spec.substr(pos), &used);
        } catch (const std::exception&) {
            return fail(pos, "expected a number");
        }
        out.values.push_back(v);
        pos += used;
        if (pos < spec.size()) {
            if (spec[pos] != ',') return fail(pos, "expected ','");
            ++pos;
            if (pos == spec.size()) return fail(pos, "trailing ','");
        }
    }
    if (out.values.empty()) return fail(colon + 1, "expected at least one number");
    if (out.kind == "phi-lambda" && out.values.size() != 1)
        return fail(colon + 1, "phi-lambda takes exactly one parameter");
    return out;
}

ExperimentReport run_check_norm(const RunConfig& cfg, const NormSpec& spec, int points) {
    ExperimentReport rep;
    rep.id = "check-norm";
    rep.operation = "check-norm";
    rep.seed = cfg.seed;
    rep.tolerance = 0.0;
    rep.tolerance_kind = "strict margin 2*lambda_min - lambda_max > 0";
    if (spec.kind == "diag") {
        auto a = finsler::SymMatrix::diagonal(spec.values);
        auto b = finsler::SymMatrix::identity(spec.values.size());
        auto [lo, hi] = finsler::relative_eigen_range(a, b);
        finsler::CaseRow row;
        row.inputs = {{"spec", "diag"}, {"eigenvalues", spec.values},
                      {"lambda_min", lo}, {"lambda_max", hi}};
        row.computed = 2.0 * lo - hi;
        row.oracle = 0.0;
        finsler::fill_errors(row);
        row.pass = row.computed > 0.0;
        rep.rows.push_back(row);
        return rep;
    }
    double lambda = spec.values[0];
    RunConfig sub = cfg;
    sub.lambdas = {lambda};
    rep = finsler::stages::stage_minkowski(sub);
    rep.id = "check-norm";
    rep.operation = "check-norm";
    (void)points;  // point count of the stage sweep is fixed at 10 per lambda
    if (points > 10) {
        // extend with extra sample points
        double l2 = lambda * lambda;
        for (int k = 10; k < points; ++k) {
            finsler::CounterRng rng(cfg.seed, k, finsler::stages::kMinkowski);
            finsler::Vec3 x = rng.ball(2.0);
            double nx2 = dot(x, x);
            finsler::SymMatrix g(3);
            std::vector<double> xs{x.x1, x.x2, x.x3};
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = i; j < 3; ++j) {
                    double v = l2 * xs[i] * xs[j];
                    if (i == j) v += 1.0 + l2 * nx2;
                    g.set(i, j, v);
                }
            auto [lo, hi] = finsler::relative_eigen_range(g, finsler::SymMatrix::identity(3));
            finsler::CaseRow row;
            row.inputs = {{"lambda", lambda}, {"x", xs}};
            row.computed = 2.0 * lo - hi;
            row.oracle = 0.0;
            finsler::fill_errors(row);
            row.pass = row.computed > 0.0;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

ExperimentReport run_crofton_cmd(const RunConfig& cfg, const std::string& mesh_spec,
                                 double radius) {
    finsler::SurfaceMesh mesh;
    double oracle = 0.0;
    if (mesh_spec == "disc") {
        mesh = finsler::make_disc_mesh();
        oracle = std::numbers::pi;
        if (radius <= 0) radius = mesh.bounding_radius();
    } else if (mesh_spec == "sphere") {
        mesh = finsler::make_sphere_mesh();
        oracle = 4.0 * std::numbers::pi;
        if (radius <= 0) radius = 1.5;
    } else {
        mesh = finsler::load_off(mesh_spec);
        mesh.validate();
        oracle = mesh.area();
        if (radius <= 0) radius = 1.5 * mesh.bounding_radius();
    }
    auto est = finsler::crofton_area_euclidean(mesh, cfg.crofton_samples, cfg.seed, radius);
    ExperimentReport rep;
    rep.id = "crofton";
    rep.operation = "crofton";
    rep.seed = cfg.seed;
    rep.tolerance = cfg.crofton_sigmas;
    rep.tolerance_kind = "standard errors";
    finsler::CaseRow row;
    row.inputs = {{"mesh", mesh_spec}, {"samples", cfg.crofton_samples}, {"R", radius},
                  {"stderr", est.stderr_}, {"degenerate_redraws", est.degenerate_redraws}};
    row.computed = est.estimate;
    row.oracle = oracle;
    finsler::fill_errors(row);
    row.pass = row.abs_err <= cfg.crofton_sigmas * est.stderr_;
    rep.rows.push_back(row);
    return rep;
}

int run_plot_data(const RunConfig& cfg, const std::string& id) {
    std::filesystem::path dir(cfg.out_dir);
    if (id == "geodesic") {
        std::ifstream in(dir / "geodesic_path.csv");
        if (!in) {
            std::cerr << "no path data for experiment id: " << id << '\n';
            return 1;
        }
        std::cout << in.rdbuf();
        return 0;
    }
    std::ifstream in(dir / (id + ".json"));
    if (!in) {
        std::cerr << "unknown experiment id: " << id << '\n';
        return 1;
    }
    finsler::json j = finsler::json::parse(in);
    if (id == "berck" || id == "certificate") {
        std::cout << "lambda,t,residual_fd,residual_closed,rel_err\n";
        for (const auto& row : j.at("rows")) {
            std::cout << finsler::format_double(row.at("inputs").at("lambda").get<double>()) << ','
                      << finsler::format_double(row.at("inputs").at("t").get<double>()) << ','
                      << finsler::format_double(row.at("computed").get<double>()) << ','
                      << finsler::format_double(row.at("oracle").get<double>()) << ','
                      << finsler::format_double(row.at("rel_err").get<double>()) << '\n';
        }
        return 0;
    }
    if (id == "crofton") {
        std::cout << "batch,estimate,stderr\n";
        int batch = 0;
        for (const auto& row : j.at("rows")) {
            std::cout << batch++ << ','
                      << finsler::format_double(row.at("computed").get<double>()) << ','
                      << finsler::format_double(row.at("inputs").at("stderr").get<double>())
                      << '\n';
        }
        return 0;
    }
    // generic tidy dump
    std::cout << "inputs,computed,oracle,abs_err,rel_err,verdict\n";
    for (const auto& row : j.at("rows")) {
        std::cout << finsler::csv_field(row.at("inputs").dump()) << ','
                  << finsler::format_double(row.at("computed").get<double>()) << ','
                  << finsler::format_double(row.at("oracle").get<double>()) << ','
                  << finsler::format_double(row.at("abs_err").get<double>()) << ','
                  << finsler::format_double(row.at("rel_err").get<double>()) << ','
                  << row.at("verdict").get<std::string>() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for Finsler metrics, Funk transforms, and Crofton formulas"};
    app.require_subcommand(1);

    struct Cmd {
        CLI::App* sub;
        ConfigFlags flags;
    };
    std::map<std::string, Cmd> cmds;
    for (const char* name : {"check-norm", "funk", "area-integrand", "hamel", "berck",
                             "geodesic", "crofton", "reduce-check", "reproduce", "plot-data"}) {
        Cmd c;
        c.sub = app.add_subcommand(name);
        cmds.emplace(name, std::move(c));
        cmds[name].flags.attach(cmds[name].sub);
    }

    std::string norm_spec;
    int check_points = 20;
    cmds["check-norm"].sub->add_option("spec", norm_spec, "matrix spec: diag:... or phi-lambda:L")
        ->required();
    cmds["check-norm"].sub->add_option("--points", check_points, "sample points for metric specs");

    std::string mesh_spec = "disc";
    double crofton_radius = -1.0;
    cmds["crofton"].sub->add_option("--mesh", mesh_spec, "disc, sphere, or path to an OFF file");
    cmds["crofton"].sub->add_option("--radius", crofton_radius,
                                    "sampling slab radius (default per mesh)");

    std::string plot_id;
    cmds["plot-data"].sub->add_option("id", plot_id, "experiment id of an existing report")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        auto name = app.get_subcommands().front()->get_name();
        RunConfig cfg = cmds[name].flags.resolve();
        if (name == "check-norm")
            return emit(cfg, run_check_norm(cfg, parse_norm_spec(norm_spec), check_points));
        if (name == "funk") return emit(cfg, finsler::stages::stage_funk(cfg));
        if (name == "area-integrand") return emit(cfg, finsler::stages::stage_area(cfg));
        if (name == "hamel") return emit(cfg, finsler::stages::stage_hamel(cfg));
        if (name == "berck") return emit(cfg, finsler::stages::stage_berck(cfg));
        if (name == "geodesic") return emit(cfg, finsler::stages::stage_geodesic(cfg));
        if (name == "crofton") return emit(cfg, run_crofton_cmd(cfg, mesh_spec, crofton_radius));
        if (name == "reduce-check") return emit(cfg, finsler::stages::stage_reduce(cfg));
        if (name == "plot-data") return run_plot_data(cfg, plot_id);
        // reproduce
        auto bundle = finsler::run_reproduce(cfg);
        for (const auto& rep : bundle.reports)
            std::cout << rep.id << ": " << (rep.overall_pass() ? "pass" : "fail")
                      << (rep.error.empty() ? "" : " (" + rep.error + ")") << '\n';
        std::cout << "overall: " << (bundle.overall_pass ? "pass" : "fail") << '\n';
        return bundle.overall_pass ? 0 : 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "finsler/config.hpp"
#include "finsler/crofton.hpp"
#include "finsler/funk.hpp"
#include "finsler/geodesics.hpp"
#include "finsler/geometry.hpp"
#include "finsler/mesh.hpp"
#include "finsler/norms.hpp"
#include "finsler/projectivity.hpp"
#include "finsler/report.hpp"
#include "finsler/rng.hpp"

namespace finsler {

inline const char* kFunkOracleExpr =
    "pi/s^3 * (2*s^2 + l^2*|x|^2 - l^2*<x,a>^2) / (s^2 + l^2*|x|^2 - l^2*<x,a>^2)^(3/2)";
inline const char* kAreaOracleExpr =
    "2*(1+l^2*|x|^2)^(3/2) * ((1+2*l^2*|x|^2)*|a|^2 - l^2*<x,a>^2)^(3/2)"
    " / ((2+3*l^2*|x|^2)*|a|^2 - l^2*<x,a>^2)";
inline const char* kBerckOracleExpr =
    "-24*(1+3*l^2*t^2)^(3/2)*l^8*t^7 / ((2+7*l^2*t^2)^3*sqrt(2+8*l^2*t^2))";

namespace stages {

// distinct RNG lanes per stage keep the draws independent
enum Lane : std::uint64_t {
    kMinkowski = 1,
    kFunk = 2,
    kArea = 3,
    kHamel = 4,
    kGeodesic = 5,
    kCrofton = 6,
};

inline ExperimentReport stage_minkowski(const RunConfig& cfg) {
    ExperimentReport r;
    r.id = "minkowski";
    r.operation = "check-norm";
    r.seed = cfg.seed;
    r.tolerance = 0.0;
    r.tolerance_kind = "strict margin 2*lambda_min - lambda_max > 0";
    for (double lambda : cfg.lambdas) {
        std::vector<std::vector<double>> points;
        for (int k = 0; k < 10; ++k) {
            CounterRng rng(cfg.seed, k, kMinkowski);
            Vec3 x = rng.ball(2.0);
            points.push_back({x.x1, x.x2, x.x3});
        }
        double l2 = lambda * lambda;
        auto g = [l2](const std::vector<double>& x) {
            double nx2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            SymMatrix m(3);
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = i; j < 3; ++j) {
                    double v = l2 * x[i] * x[j];
                    if (i == j) v += 1.0 + l2 * nx2;
                    m.set(i, j, v);
                }
            }
            return m;
        };
        auto h = [](const std::vector<double>&) { return SymMatrix::identity(3); };
        auto report = is_finsler_gsqrt(g, h, points);
        double min_margin = 1e300;
        bool all = true;
        for (const auto& p : report.points) {
            if (!p.ok || !p.minkowski) all = false;
            if (p.ok) min_margin = std::min(min_margin, p.margin);
        }
        CaseRow row;
        row.inputs = {{"lambda", lambda}, {"points", points.size()}};
        row.computed = min_margin;
        row.oracle = 0.0;
        fill_errors(row);
        row.pass = all && min_margin > 0.0;
        r.rows.push_back(row);
    }
    return r;
}

inline ExperimentReport stage_funk(const RunConfig& cfg) {
    ExperimentReport r;
    r.id = "funk";
    r.operation = "funk";
    r.seed = cfg.seed;
    r.tolerance = cfg.funk_tol;
    r.tolerance_kind = "relative";
    r.oracle_expressions = {kFunkOracleExpr};
    GreatCircleQuadrature quad{cfg.funk_nodes};
    for (int i = 0; i < 200; ++i) {
        CounterRng rng(cfg.seed, i, kFunk);
        double s = rng.uniform(0.5, 4.0);
        double lambda = rng.uniform(0.0, 2.0);
        Vec3 x = rng.ball(2.0);
        Vec3 a = rng.unit_sphere();
        double l2 = lambda * lambda;
        auto f = [&](Vec3 v) {
            double q = dot(x, v);
            double d = s * s + l2 * q * q;
            return 1.0 / (d * d);
        };
        CaseRow row;
        row.inputs = {{"s", s}, {"lambda", lambda}, {"x", {x.x1, x.x2, x.x3}},
                      {"a", {a.x1, a.x2, a.x3}}, {"nodes", quad.node_count}};
        row.computed = funk_transform(f, a, quad);
        row.oracle = funk_closed_form(s, lambda, x, a);
        fill_errors(row);
        row.pass = row.rel_err <= cfg.funk_tol;
        r.rows.push_back(row);
    }
    return r;
}

inline ExperimentReport stage_area(const RunConfig& cfg) {
    ExperimentReport r;
    r.id = "area-integrand";
    r.operation = "area-integrand";
    r.seed = cfg.seed;
    r.tolerance = cfg.area_tol;
    r.tolerance_kind = "relative";
    r.oracle_expressions = {kAreaOracleExpr};
    GreatCircleQuadrature quad{cfg.funk_nodes};
    const std::vector<double> radii = {0.0, 0.5, 1.0, 2.0};
    int draw = 0;
    for (double lambda : cfg.lambdas) {
        NormField metric = phi_lambda_norm(lambda);
        for (double radius : radii) {
            CaseRow worst;
            worst.rel_err = -1.0;
            for (int k = 0; k < 20; ++k) {
                CounterRng rng(cfg.seed, draw++, kArea);
                Vec3 x = radius * rng.unit_sphere();
                Bivec3 a = Bivec3::from_coords(rng.uniform(0.2, 3.0) * rng.unit_sphere());
                CaseRow row;
                row.inputs = {{"lambda", lambda}, {"radius", radius},
                              {"x", {x.x1, x.x2, x.x3}}, {"a", {a.a1, a.a2, a.a3}}};
                row.computed = hausdorff_area_integrand_numeric(metric, x, a, quad);
                row.oracle = phi_lambda_area_integrand(lambda, x, a);
                fill_errors(row);
                row.pass = row.rel_err <= cfg.area_tol;
                if (row.rel_err > worst.rel_err) worst = row;
            }
            r.rows.push_back(worst);
        }
    }
    return r;
}

inline ExperimentReport stage_hamel(const RunConfig& cfg) {
    ExperimentReport r;
    r.id = "hamel";
    r.operation = "hamel";
    r.seed = cfg.seed;
    r.tolerance = cfg.hamel_tol;
    r.tolerance_kind = "absolute";
    FDScheme scheme{cfg.fd_base_step, true};
    int draw = 0;
    for (double lambda : cfg.lambdas) {
        auto phi = length_integrand(phi_lambda_norm(lambda));
        double max_res = 0.0;
        for (int k = 0; k < 100; ++k) {
            CounterRng rng(cfg.seed, draw++, kHamel);
            Vec3 x = rng.ball(2.0);
            Vec3 v = rng.uniform(0.5, 2.0) * rng.unit_sphere();
            auto res = hamel_residual(phi, {x.x1, x.x2, x.x3}, {v.x1, v.x2, v.x3}, scheme);
            max_res = std::max(max_res, res.max_abs());
        }
        CaseRow row;
        row.inputs = {{"lambda", lambda}, {"samples", 100}};
        row.computed = max_res;
        row.oracle = 0.0;
        fill_errors(row);
        row.pass = max_res <= cfg.hamel_tol;
        r.rows.push_back(row);
    }
    return r;
}

inline ExperimentReport stage_geodesic(const RunConfig& cfg, GeodesicPath* sample_path = nullptr) {
    ExperimentReport r;
    r.id = "geodesic";
    r.operation = "geodesic";
    r.seed = cfg.seed;
    r.tolerance = cfg.geodesic_tol;
    r.tolerance_kind = "absolute";
    FDScheme scheme{cfg.fd_base_step, true};
    int draw = 0;
    for (double lambda : cfg.lambdas) {
        if (lambda == 0.0) continue;  // Euclidean case is covered by unit tests
        NormField metric = phi_lambda_norm(lambda);
        double max_dev = 0.0, max_drift = 0.0;
        for (int k = 0; k < 20; ++k) {
            CounterRng rng(cfg.seed, draw++, kGeodesic);
            Vec3 x0 = rng.ball(1.0);
            Vec3 v0 = rng.unit_sphere();
            auto path = integrate_geodesic(metric, x0, v0, 1.0, cfg.geodesic_steps, scheme);
            max_dev = std::max(max_dev, straightness_deviation(path));
            max_drift = std::max(max_drift, speed_drift(path, metric));
            if (sample_path && sample_path->states.empty() && lambda == 1.0)
                *sample_path = path;
        }
        CaseRow row;
        row.inputs = {{"lambda", lambda}, {"trajectories", 20},
                      {"steps", cfg.geodesic_steps}, {"T", 1.0}};
        row.computed = std::max(max_dev, max_drift);
        row.oracle = 0.0;
        fill_errors(row);
        row.pass = max_dev <= cfg.geodesic_tol && max_drift <= cfg.geodesic_tol;
        r.rows.push_back(row);
    }
    {
        // the conformal counterexample must visibly bend
        NormField metric = x1_conformal_norm();
        auto path = integrate_geodesic(metric, Vec3{0, 0, 0}, Vec3{0, 1, 0}, 1.0,
                                       cfg.geodesic_steps, scheme);
        CaseRow row;
        row.inputs = {{"metric", metric.label}, {"x0", {0, 0, 0}}, {"v0", {0, 1, 0}}};
        row.computed = straightness_deviation(path);
        row.oracle = 1e-2;
        fill_errors(row);
        row.pass = row.computed > 1e-2;
        r.rows.push_back(row);
    }
    return r;
}

inline ExperimentReport stage_berck(const RunConfig& cfg) {
    ExperimentReport r;
    r.id = "berck";
    r.operation = "berck";
    r.seed = cfg.seed;
    r.tolerance = 1e-4;
    r.tolerance_kind = "max(1e-4 relative, 1e-8 absolute)";
    r.oracle_expressions = {kBerckOracleExpr};
    FDScheme scheme{cfg.fd_base_step, true};
    for (double lambda : cfg.lambdas) {
        auto phi = area_integrand_phi_lambda(lambda);
        for (double t : cfg.ts) {
            CaseRow row;
            row.inputs = {{"lambda", lambda}, {"t", t}, {"x", {t, t, t}}, {"a", {1, 1, 0}}};
            double err = 0.0;
            row.computed = berck_residual(phi, {t, t, t}, {1, 1, 0}, scheme, &err);
            row.oracle = main_theorem_residual_closed_form(lambda, t);
            fill_errors(row);
            row.pass = row.abs_err <= std::max(1e-4 * std::abs(row.oracle), 1e-8);
            r.rows.push_back(row);
        }
    }
    return r;
}

inline ExperimentReport stage_crofton(const RunConfig& cfg) {
    ExperimentReport r;
    r.id = "crofton";
    r.operation = "crofton";
    r.seed = cfg.seed;
    r.tolerance = cfg.crofton_sigmas;
    r.tolerance_kind = "standard errors";
    {
        auto disc = make_disc_mesh();
        double radius = disc.bounding_radius();  // rim sits a hair past 1 after area scaling
        auto est = crofton_area_euclidean(disc, cfg.crofton_samples, cfg.seed, radius);
        CaseRow row;
        row.inputs = {{"mesh", "flat unit disc"}, {"samples", cfg.crofton_samples},
                      {"R", radius}, {"stderr", est.stderr_},
                      {"degenerate_redraws", est.degenerate_redraws}};
        row.computed = est.estimate;
        row.oracle = std::numbers::pi;
        fill_errors(row);
        row.pass = row.abs_err <= cfg.crofton_sigmas * est.stderr_ &&
                   est.stderr_ < 0.005 * std::numbers::pi;
        r.rows.push_back(row);
    }
    {
        auto sphere = make_sphere_mesh();
        auto est = crofton_area_euclidean(sphere, cfg.crofton_samples, cfg.seed, 1.5);
        CaseRow row;
        row.inputs = {{"mesh", "unit sphere"}, {"samples", cfg.crofton_samples},
                      {"R", 1.5}, {"stderr", est.stderr_},
                      {"degenerate_redraws", est.degenerate_redraws}};
        row.computed = est.estimate;
        row.oracle = 4.0 * std::numbers::pi;
        fill_errors(row);
        row.pass = row.abs_err <= cfg.crofton_sigmas * est.stderr_;
        r.rows.push_back(row);
    }
    return r;
}

inline ExperimentReport stage_reduce(const RunConfig& cfg) {
    ExperimentReport r;
    r.id = "reduce-check";
    r.operation = "reduce-check";
    r.seed = cfg.seed;
    r.tolerance = cfg.reduce_tol;
    r.tolerance_kind = "relative";
    SurfaceGrid sg{cfg.reduce_surface_s, cfg.reduce_surface_t};
    FiberGrid fg{cfg.reduce_fiber_alpha, cfg.reduce_fiber_beta};
    auto patch = flat_disc_patch();
    std::vector<NormField> metrics = {euclidean_norm(), scaled_euclidean_norm(2.0),
                                      phi_lambda_norm(0.5), phi_lambda_norm(1.0)};
    for (const auto& metric : metrics) {
        double cosphere = cosphere_restriction_integral(patch, metric, sg, fg);
        double codisc = codisc_integral(patch, metric, sg, cfg.dual_samples);
        CaseRow row;
        row.inputs = {{"metric", metric.label}, {"patch", "flat unit disc"},
                      {"codisc_integral", codisc}};
        row.computed = cosphere;
        row.oracle = 2.0 * codisc;
        fill_errors(row);
        row.pass = row.rel_err <= cfg.reduce_tol;
        r.rows.push_back(row);
        if (metric.label == "euclidean") {
            CaseRow abs_row;
            abs_row.inputs = {{"metric", metric.label}, {"check", "cosphere vs 4*pi^2"}};
            abs_row.computed = cosphere;
            abs_row.oracle = 4.0 * std::numbers::pi * std::numbers::pi;
            fill_errors(abs_row);
            abs_row.pass = abs_row.rel_err <= 1e-2;
            r.rows.push_back(abs_row);
        }
    }
    return r;
}

inline ExperimentReport stage_certificate(const RunConfig& cfg) {
    ExperimentReport r;
    r.id = "certificate";
    r.operation = "no-crofton-certificate";
    r.seed = cfg.seed;
    r.tolerance = 10.0;
    r.tolerance_kind = "FD error multiples";
    r.oracle_expressions = {kBerckOracleExpr};
    FDScheme scheme{cfg.fd_base_step, true};
    json certs = json::array();
    for (double lambda : cfg.lambdas) {
        auto cert = no_crofton_certificate(lambda, cfg.ts, scheme);
        json cj;
        cj["lambda"] = lambda;
        cj["statement"] = cert.statement;
        cj["note"] = cert.comparison_note;
        certs.push_back(cj);
        CaseRow row;
        row.inputs = {{"lambda", lambda}, {"statement", cert.statement}};
        double max_res = 0.0;
        bool matches = true;
        for (const auto& cr : cert.rows) {
            max_res = std::max(max_res, std::abs(cr.residual_fd));
            matches = matches && cr.matches_closed;
        }
        row.computed = max_res;
        row.oracle = lambda == 0.0 ? 0.0 : max_res;
        fill_errors(row);
        row.pass = (lambda == 0.0) ? cert.crofton_exists_consistent
                                   : (!cert.crofton_exists_consistent && matches);
        r.rows.push_back(row);
    }
    r.extra = certs;
    return r;
}

}  // namespace stages

struct ReproduceBundle {
    std::vector<ExperimentReport> reports;
    bool overall_pass = false;
};

/// Runs every stage in order (stage errors are recorded, later stages
/// still run), writes one JSON report per stage, a summary CSV of the
/// lambda/t residual table, and a sample geodesic path CSV.
inline ReproduceBundle run_reproduce(const RunConfig& cfg, bool write_files = true) {
    cfg.validate();
    ReproduceBundle bundle;
    GeodesicPath sample_path;

    using StageFn = std::function<ExperimentReport()>;
    std::vector<StageFn> stage_fns = {
        [&] { return stages::stage_minkowski(cfg); },
        [&] { return stages::stage_funk(cfg); },
        [&] { return stages::stage_area(cfg); },
        [&] { return stages::stage_hamel(cfg); },
        [&] { return stages::stage_geodesic(cfg, &sample_path); },
        [&] { return stages::stage_berck(cfg); },
        [&] { return stages::stage_crofton(cfg); },
        [&] { return stages::stage_reduce(cfg); },
        [&] { return stages::stage_certificate(cfg); },
    };
    const char* ids[] = {"minkowski", "funk",    "area-integrand", "hamel",      "geodesic",
                         "berck",     "crofton", "reduce-check",   "certificate"};
    for (std::size_t i = 0; i < stage_fns.size(); ++i) {
        ExperimentReport report;
        auto start = std::chrono::steady_clock::now();
        try {
            report = stage_fns[i]();
        } catch (const std::exception& e) {
            report.id = ids[i];
            report.operation = ids[i];
            report.error = e.what();
        }
        report.config = cfg.snapshot();
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bundle.reports.push_back(std::move(report));
    }

    bundle.overall_pass = true;
    for (const auto& rep : bundle.reports)
        if (!rep.overall_pass()) bundle.overall_pass = false;

    if (write_files) {
        std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        for (const auto& rep : bundle.reports) rep.write(dir);
        // summary CSV of the lambda/t residual table
        for (const auto& rep : bundle.reports) {
            if (rep.id != "berck") continue;
            std::ofstream csv(dir / "summary.csv");
            csv << "lambda,t,residual_fd,residual_closed,rel_err\n";
            for (const auto& row : rep.rows) {
                csv << format_double(row.inputs.at("lambda").get<double>()) << ','
                    << format_double(row.inputs.at("t").get<double>()) << ','
                    << format_double(row.computed) << ',' << format_double(row.oracle) << ','
                    << format_double(row.rel_err) << '\n';
            }
        }
        if (!sample_path.states.empty()) {
            std::ofstream csv(dir / "geodesic_path.csv");
            write_path_csv(csv, sample_path, phi_lambda_norm(1.0));
        }
    }
    return bundle;
}

}  // namespace finsler

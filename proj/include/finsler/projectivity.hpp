#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/fd.hpp"
#include "finsler/funk.hpp"
#include "finsler/geometry.hpp"
#include "finsler/norms.hpp"

namespace finsler {

/// A degree-k parametric integrand Phi(x, a), positively 1-homogeneous in
/// a. Only k = 1 and k = n-1 are characterized by the residual operations
/// below. For k = n-1 the a-coordinates are taken with respect to the
/// signed basis (-1)^(i-1) e_1^...^ê_i^...^e_n, which for n = 3 coincides
/// with the Bivec3 coordinates.
struct DifferentialIntegrand {
    std::size_t n = 3;
    std::size_t k = 1;
    std::string label;
    std::function<double(const std::vector<double>& x, const std::vector<double>& a)> evaluate;

    double operator()(const std::vector<double>& x, const std::vector<double>& a) const {
        return evaluate(x, a);
    }
};

inline DifferentialIntegrand length_integrand(const NormField& norm) {
    DifferentialIntegrand phi;
    phi.n = norm.dimension;
    phi.k = 1;
    phi.label = norm.label;
    phi.evaluate = norm.evaluate;
    return phi;
}

inline DifferentialIntegrand area_integrand_phi_lambda(double lambda) {
    DifferentialIntegrand phi;
    phi.n = 3;
    phi.k = 2;
    phi.label = "hausdorff-area(phi-lambda:" + std::to_string(lambda) + ")";
    phi.evaluate = [lambda](const std::vector<double>& x, const std::vector<double>& a) {
        return phi_lambda_area_integrand(lambda, Vec3{x[0], x[1], x[2]},
                                         Bivec3{a[0], a[1], a[2]});
    };
    return phi;
}

struct HamelResidual {
    std::size_t n = 0;
    std::vector<double> entries;  // row-major, antisymmetric by construction
    double fd_error = 0;          // max FD error estimate over entries

    double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    double max_abs() const {
        double m = 0;
        for (double e : entries) m = std::max(m, std::abs(e));
        return m;
    }
};

/// R_ij = d2Phi/dx_i dv_j - d2Phi/dx_j dv_i; Phi is projective (k = 1)
/// iff R vanishes identically.
inline HamelResidual hamel_residual(const DifferentialIntegrand& phi, const std::vector<double>& x,
                                    const std::vector<double>& v, const FDScheme& scheme = {}) {
    if (phi.k != 1) throw std::invalid_argument("hamel_residual requires a degree-1 integrand");
    double nv = 0;
    for (double c : v) nv += c * c;
    if (nv == 0.0) throw std::domain_error("integrand not smooth at v = 0");
    std::size_t n = phi.n;
    std::vector<double> c(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = x[i];
        c[n + i] = v[i];
    }
    auto f = [&](const std::vector<double>& cc) {
        std::vector<double> xx(cc.begin(), cc.begin() + n);
        std::vector<double> vv(cc.begin() + n, cc.end());
        return phi(xx, vv);
    };
    HamelResidual r;
    r.n = n;
    r.entries.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double e1 = 0, e2 = 0;
            double mij = mixed_second(f, c, i, n + j, scheme, &e1);
            double mji = mixed_second(f, c, j, n + i, scheme, &e2);
            r.entries[i * n + j] = mij - mji;
            r.entries[j * n + i] = mji - mij;
            r.fd_error = std::max(r.fd_error, e1 + e2);
        }
    }
    return r;
}

/// Sum_i d2Phi/dx_i da_i at (x, a); zero everywhere iff Phi is projective
/// (k = n-1).
inline double berck_residual(const DifferentialIntegrand& phi, const std::vector<double>& x,
                             const std::vector<double>& a, const FDScheme& scheme = {},
                             double* error_estimate = nullptr) {
    if (phi.k != phi.n - 1)
        throw std::invalid_argument("berck_residual requires a degree-(n-1) integrand");
    double na = 0;
    for (double c : a) na += c * c;
    if (na == 0.0) throw std::domain_error("integrand not smooth at a = 0");
    std::size_t n = phi.n;
    std::vector<double> c(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = x[i];
        c[n + i] = a[i];
    }
    auto f = [&](const std::vector<double>& cc) {
        std::vector<double> xx(cc.begin(), cc.begin() + n);
        std::vector<double> aa(cc.begin() + n, cc.end());
        return phi(xx, aa);
    };
    double sum = 0, err = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = 0;
        sum += mixed_second(f, c, i, n + i, scheme, &e);
        err += e;
    }
    if (error_estimate) *error_estimate = err;
    return sum;
}

/// The Berck residual of the Hausdorff 2-area integrand of phi_lambda
/// along the curve (t,t,t; 1,1,0), in closed form.
inline double main_theorem_residual_closed_form(double lambda, double t) {
    double l2t2 = lambda * lambda * t * t;
    double num = -24.0 * std::pow(1.0 + 3.0 * l2t2, 1.5) * std::pow(lambda, 8) * std::pow(t, 7);
    double den = std::pow(2.0 + 7.0 * l2t2, 3) * std::sqrt(2.0 + 8.0 * l2t2);
    return num / den;
}

struct ProjectivitySample {
    std::vector<double> x;
    std::vector<double> a;  // velocity for k=1, (n-1)-vector coordinates otherwise
};

struct ProjectivityRow {
    double residual_norm = 0;
    double fd_error = 0;
};

struct ProjectivityReport {
    std::vector<ProjectivityRow> rows;
    double max_residual = 0;
    double tolerance = 0;
    bool projective_on_samples = false;
};

/// Per-sample residual norms of d_x(deltaPhi): the Hamel matrix norm for
/// k = 1, |Berck sum| for k = n-1. Other degrees are rejected.
inline ProjectivityReport projectivity_report(const DifferentialIntegrand& phi,
                                              const std::vector<ProjectivitySample>& samples,
                                              const FDScheme& scheme = {}, double tol = 1e-6) {
    if (phi.k != 1 && phi.k != phi.n - 1)
        throw std::invalid_argument("only k=1 and k=n-1 characterized");
    ProjectivityReport report;
    report.tolerance = tol;
    for (const auto& s : samples) {
        ProjectivityRow row;
        if (phi.k == 1) {
            auto r = hamel_residual(phi, s.x, s.a, scheme);
            row.residual_norm = r.max_abs();
            row.fd_error = r.fd_error;
        } else {
            double err = 0;
            row.residual_norm = std::abs(berck_residual(phi, s.x, s.a, scheme, &err));
            row.fd_error = err;
        }
        report.max_residual = std::max(report.max_residual, row.residual_norm);
        report.rows.push_back(row);
    }
    report.projective_on_samples = !report.rows.empty() && report.max_residual <= tol;
    return report;
}

}  // namespace finsler

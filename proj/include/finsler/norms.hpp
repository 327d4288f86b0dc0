#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsler/fd.hpp"
#include "finsler/geometry.hpp"
#include "finsler/linalg.hpp"

namespace finsler {

/// A Finsler metric on a chart of R^n as an evaluation contract
/// (x, v) -> nonnegative real, positively 1-homogeneous in v. Evaluation
/// must be pure and re-entrant. Derivatives come from the shared FD
/// engine unless a closed-form override is registered.
struct NormField {
    std::size_t dimension = 3;
    std::string label;
    std::function<double(const std::vector<double>& x, const std::vector<double>& v)> evaluate;

    // Optional exact first derivatives of evaluate, used for cross-checks
    // and for the geodesic spray when present.
    std::function<std::vector<double>(const std::vector<double>&, const std::vector<double>&)> grad_x;
    std::function<std::vector<double>(const std::vector<double>&, const std::vector<double>&)> grad_v;

    // Optional exact dual norm phi*(x, xi) = max_{v != 0} <xi,v>/phi(x,v).
    std::function<double(const std::vector<double>&, const std::vector<double>&)> dual;

    double operator()(const std::vector<double>& x, const std::vector<double>& v) const {
        return evaluate(x, v);
    }
    double operator()(Vec3 x, Vec3 v) const {
        return evaluate({x.x1, x.x2, x.x3}, {v.x1, v.x2, v.x3});
    }
};

inline NormField euclidean_norm(std::size_t n = 3) {
    NormField f;
    f.dimension = n;
    f.label = "euclidean";
    f.evaluate = [](const std::vector<double>&, const std::vector<double>& v) {
        double s = 0;
        for (double c : v) s += c * c;
        return std::sqrt(s);
    };
    f.grad_x = [n](const std::vector<double>&, const std::vector<double>&) {
        return std::vector<double>(n, 0.0);
    };
    f.grad_v = [](const std::vector<double>&, const std::vector<double>& v) {
        double s = 0;
        for (double c : v) s += c * c;
        double nv = std::sqrt(s);
        std::vector<double> g(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) g[i] = v[i] / nv;
        return g;
    };
    f.dual = [](const std::vector<double>&, const std::vector<double>& xi) {
        double s = 0;
        for (double c : xi) s += c * c;
        return std::sqrt(s);
    };
    return f;
}

inline NormField scaled_euclidean_norm(double c, std::size_t n = 3) {
    NormField f = euclidean_norm(n);
    f.label = std::to_string(c) + "*euclidean";
    auto base_eval = f.evaluate;
    auto base_grad = f.grad_v;
    auto base_dual = f.dual;
    f.evaluate = [c, base_eval](const std::vector<double>& x, const std::vector<double>& v) {
        return c * base_eval(x, v);
    };
    f.grad_v = [c, base_grad](const std::vector<double>& x, const std::vector<double>& v) {
        auto g = base_grad(x, v);
        for (double& gi : g) gi *= c;
        return g;
    };
    f.dual = [c, base_dual](const std::vector<double>& x, const std::vector<double>& xi) {
        return base_dual(x, xi) / c;
    };
    return f;
}

/// phi_lambda(x,v) = ((1+l^2|x|^2)|v|^2 + l^2<x,v>^2)/|v|, continuously
/// extended by 0 at v = 0.
inline double phi_lambda_eval(double lambda, const std::vector<double>& x,
                              const std::vector<double>& v) {
    double nx2 = 0, nv2 = 0, q = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        nx2 += x[i] * x[i];
        nv2 += v[i] * v[i];
        q += x[i] * v[i];
    }
    double nv = std::sqrt(nv2);
    if (nv == 0.0) return 0.0;
    double l2 = lambda * lambda;
    return ((1.0 + l2 * nx2) * nv2 + l2 * q * q) / nv;
}

inline double phi_lambda_eval(double lambda, Vec3 x, Vec3 v) {
    return phi_lambda_eval(lambda, std::vector<double>{x.x1, x.x2, x.x3},
                           std::vector<double>{v.x1, v.x2, v.x3});
}

inline NormField phi_lambda_norm(double lambda, std::size_t n = 3) {
    NormField f;
    f.dimension = n;
    f.label = "phi-lambda:" + std::to_string(lambda);
    double l2 = lambda * lambda;
    f.evaluate = [lambda](const std::vector<double>& x, const std::vector<double>& v) {
        return phi_lambda_eval(lambda, x, v);
    };
    f.grad_x = [l2](const std::vector<double>& x, const std::vector<double>& v) {
        double nv2 = 0, q = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            nv2 += v[i] * v[i];
            q += x[i] * v[i];
        }
        double nv = std::sqrt(nv2);
        std::vector<double> g(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            g[i] = 2.0 * l2 * x[i] * nv + 2.0 * l2 * q * v[i] / nv;
        return g;
    };
    f.grad_v = [l2](const std::vector<double>& x, const std::vector<double>& v) {
        double nx2 = 0, nv2 = 0, q = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            nx2 += x[i] * x[i];
            nv2 += v[i] * v[i];
            q += x[i] * v[i];
        }
        double nv = std::sqrt(nv2);
        double s = 1.0 + l2 * nx2;
        std::vector<double> g(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            g[i] = s * v[i] / nv + 2.0 * l2 * q * x[i] / nv - l2 * q * q * v[i] / (nv * nv2);
        return g;
    };
    return f;
}

/// Conformal metric (1 + x1) |v|; its geodesics bend, which makes it the
/// standing counterexample for the straightness tests.
inline NormField x1_conformal_norm(std::size_t n = 3) {
    NormField f;
    f.dimension = n;
    f.label = "conformal:(1+x1)*euclidean";
    f.evaluate = [](const std::vector<double>& x, const std::vector<double>& v) {
        double s = 0;
        for (double c : v) s += c * c;
        return (1.0 + x[0]) * std::sqrt(s);
    };
    return f;
}

/// Smallest and largest roots of det(A - lambda B) = 0, via B = L L^T and
/// a Jacobi diagonalization of L^-1 A L^-T.
inline std::pair<double, double> relative_eigen_range(const SymMatrix& a, const SymMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("matrix dimensions differ");
    std::size_t n = a.size();
    auto l = cholesky(b, "relative eigenproblem undefined: second matrix not positive definite");
    // M = L^-1 A L^-T, column by column.
    SymMatrix m(n);
    std::vector<double> col(n);
    std::vector<std::vector<double>> la(n);  // rows of L^-1 A
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = a(i, j);
        // forward solve L y = A e_j
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < i; ++k) col[i] -= l[i * n + k] * col[k];
            col[i] /= l[i * n + i];
        }
        la[j] = col;  // la[j][i] = (L^-1 A)_{i j}
    }
    for (std::size_t i = 0; i < n; ++i) {
        // row i of L^-1 A, then solve L z = row^T to apply L^-T from the right
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = la[j][i];
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < j; ++k) row[j] -= l[j * n + k] * row[k];
            row[j] /= l[j * n + j];
        }
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = row[j];
    }
    // symmetrize against roundoff
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    auto vals = jacobi_eigenvalues(m);
    return {vals.front(), vals.back()};
}

/// Strict test lambda_max < 2 lambda_min; see minkowski_margin for the
/// distance to the boundary.
inline bool is_minkowski_quotient(const SymMatrix& a, const SymMatrix& b) {
    auto [lo, hi] = relative_eigen_range(a, b);
    return hi < 2.0 * lo;
}

inline double minkowski_margin(const SymMatrix& a, const SymMatrix& b) {
    auto [lo, hi] = relative_eigen_range(a, b);
    return 2.0 * lo - hi;
}

/// Smallest eigenvalue of the FD Hessian of v -> phi(x,v)^2 at v.
inline double hessian_min_eigenvalue(const NormField& norm, const std::vector<double>& x,
                                     const std::vector<double>& v, const FDScheme& scheme = {}) {
    double nv = 0;
    for (double c : v) nv += c * c;
    if (nv == 0.0) throw std::domain_error("Hessian of phi^2 undefined at v = 0");
    std::size_t n = v.size();
    auto f = [&](const std::vector<double>& w) {
        double val = norm.evaluate(x, w);
        return val * val;
    };
    SymMatrix h(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double hij = mixed_second(f, v, i, j, scheme);
            if (i != j) hij = 0.5 * (hij + mixed_second(f, v, j, i, scheme));
            h.set(i, j, hij);
        }
    return jacobi_eigenvalues(h).front();
}

struct GsqrtPointVerdict {
    bool ok = false;
    bool minkowski = false;
    double lambda_min = 0, lambda_max = 0;
    double margin = 0;  // 2*lambda_min - lambda_max
    std::string error;
};

struct GsqrtReport {
    std::vector<GsqrtPointVerdict> points;
    bool all_minkowski() const {
        for (const auto& p : points)
            if (!p.ok || !p.minkowski) return false;
        return !points.empty();
    }
};

/// Checks at each sample point that g/sqrt(h) restricts to a Minkowski
/// norm: the eigenvalues of g relative to h must satisfy max < 2*min.
/// Degenerate points produce per-point error entries, not a global abort.
inline GsqrtReport is_finsler_gsqrt(
    const std::function<SymMatrix(const std::vector<double>&)>& g,
    const std::function<SymMatrix(const std::vector<double>&)>& h,
    const std::vector<std::vector<double>>& sample_points) {
    GsqrtReport report;
    for (const auto& x : sample_points) {
        GsqrtPointVerdict verdict;
        try {
            auto [lo, hi] = relative_eigen_range(g(x), h(x));
            if (lo <= 0.0) throw std::domain_error("g degenerate at sample point");
            verdict.ok = true;
            verdict.lambda_min = lo;
            verdict.lambda_max = hi;
            verdict.margin = 2.0 * lo - hi;
            verdict.minkowski = hi < 2.0 * lo;
        } catch (const std::exception& e) {
            verdict.error = e.what();
        }
        report.points.push_back(std::move(verdict));
    }
    return report;
}

}  // namespace finsler

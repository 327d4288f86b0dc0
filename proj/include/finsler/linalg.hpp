#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsler {

/// Dense symmetric matrix, small n. Construction checks symmetry exactly.
class SymMatrix {
public:
    explicit SymMatrix(std::size_t n) : n_(n), e_(n * n, 0.0) {}

    static SymMatrix identity(std::size_t n) {
        SymMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.e_[i * n + i] = 1.0;
        return m;
    }

    static SymMatrix diagonal(const std::vector<double>& d) {
        SymMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.e_[i * d.size() + i] = d[i];
        return m;
    }

    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        std::size_t n = rows.size();
        SymMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw std::invalid_argument("matrix rows must be square");
            for (std::size_t j = 0; j < n; ++j) m.e_[i * n + j] = rows[i][j];
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (m.e_[i * n + j] != m.e_[j * n + i])
                    throw std::invalid_argument("matrix is not symmetric");
        return m;
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    double& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }

    /// Sets both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double v) {
        e_[i * n_ + j] = v;
        e_[j * n_ + i] = v;
    }

private:
    std::size_t n_;
    std::vector<double> e_;
};

/// Lower-triangular Cholesky factor, row-major. Throws std::domain_error
/// when the matrix is not positive definite.
inline std::vector<double> cholesky(const SymMatrix& a, const std::string& what = "matrix not positive definite") {
    std::size_t n = a.size();
    std::vector<double> l(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            if (i == j) {
                if (s <= 0.0) throw std::domain_error(what);
                l[i * n + i] = std::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    return l;
}

inline std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t n,
                                          std::vector<double> b) {
    // forward: L y = b
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= l[i * n + k] * b[k];
        b[i] /= l[i * n + i];
    }
    // backward: L^T x = y
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) b[ii] -= l[k * n + ii] * b[k];
        b[ii] /= l[ii * n + ii];
    }
    return b;
}

struct EigenDecomposition {
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
};

/// Cyclic Jacobi rotations; unconditionally stable for the small
/// dimensions used here.
inline EigenDecomposition jacobi_eigen(SymMatrix a) {
    std::size_t n = a.size();
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenDecomposition d;
    d.values.resize(n);
    d.vectors.assign(n, std::vector<double>(n));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (a(order[j], order[j]) < a(order[i], order[i])) std::swap(order[i], order[j]);
    for (std::size_t k = 0; k < n; ++k) {
        d.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) d.vectors[k][i] = v[i][order[k]];
    }
    return d;
}

inline std::vector<double> jacobi_eigenvalues(const SymMatrix& a) { return jacobi_eigen(a).values; }

}  // namespace finsler

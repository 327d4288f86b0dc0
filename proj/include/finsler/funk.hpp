#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "finsler/geometry.hpp"
#include "finsler/norms.hpp"

namespace finsler {

/// Trapezoid rule on equally spaced angles of the great circle; for the
/// smooth periodic integrands used here this converges spectrally.
struct GreatCircleQuadrature {
    int node_count = 512;
};

/// The restriction of 1/phi to the Euclidean unit sphere.
struct RadialFunction {
    std::function<double(Vec3)> evaluate;
    std::string provenance;

    double operator()(Vec3 u) const { return evaluate(u); }
};

inline RadialFunction radial_of_norm(const NormField& norm, Vec3 x) {
    double probe = norm(x, Vec3{1, 0, 0});
    if (!(probe > 0.0)) throw std::domain_error("not a norm at this point");
    RadialFunction r;
    r.provenance = norm.label;
    r.evaluate = [norm, x](Vec3 u) {
        double value = norm(x, u);
        if (!(value > 0.0)) throw std::domain_error("not a norm at this point");
        return 1.0 / value;
    };
    return r;
}

/// Integral of f over the great circle orthogonal to the unit vector a.
/// The frame of the circle's plane defaults to the deterministic rule in
/// orthonormal_frame; tests exercise frame independence with overrides.
template <class F>
double funk_transform(F&& f, Vec3 a, const GreatCircleQuadrature& quad, const Frame& frame) {
    if (std::abs(norm(a) - 1.0) > 1e-10)
        throw std::invalid_argument("funk_transform requires a unit direction");
    int n = quad.node_count;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        double theta = 2.0 * std::numbers::pi * k / n;
        Vec3 v = std::cos(theta) * frame.b1 + std::sin(theta) * frame.b2;
        sum += f(v);
    }
    return sum * (2.0 * std::numbers::pi / n);
}

template <class F>
double funk_transform(F&& f, Vec3 a, const GreatCircleQuadrature& quad = {}) {
    return funk_transform(std::forward<F>(f), a, quad, orthonormal_frame(a));
}

/// Closed form of the Funk transform of v -> (s^2 + l^2 <x,v>^2)^-2.
/// Exists solely as an oracle and fast path; the numeric route never
/// calls it.
inline double funk_closed_form(double s, double lambda, Vec3 x, Vec3 a) {
    if (!(s > 0.0)) throw std::domain_error("funk_closed_form requires s > 0");
    if (std::abs(norm(a) - 1.0) > 1e-10)
        throw std::invalid_argument("funk_closed_form requires a unit direction");
    double l2 = lambda * lambda;
    double xa = dot(x, a);
    double m = l2 * dot(x, x) - l2 * xa * xa;
    return std::numbers::pi / (s * s * s) * (2.0 * s * s + m) / std::pow(s * s + m, 1.5);
}

/// Radial route to the Hausdorff 2-area integrand: 2*pi*|a| divided by
/// the Funk transform of rho^2 at a/|a|.
inline double hausdorff_area_integrand_numeric(const NormField& nf, Vec3 x, Bivec3 a,
                                               const GreatCircleQuadrature& quad = {}) {
    double na = norm(a);
    if (na == 0.0) throw std::domain_error("area integrand undefined at a = 0");
    RadialFunction rho = radial_of_norm(nf, x);
    Vec3 ahat = (1.0 / na) * a.coords();
    double transform = funk_transform(
        [&](Vec3 v) {
            double r = rho(v);
            return r * r;
        },
        ahat, quad);
    return 2.0 * std::numbers::pi * na / transform;
}

/// Closed form of the Hausdorff 2-area integrand of phi_lambda.
inline double phi_lambda_area_integrand(double lambda, Vec3 x, Bivec3 a) {
    double na2 = a.a1 * a.a1 + a.a2 * a.a2 + a.a3 * a.a3;
    if (na2 == 0.0) return 0.0;  // homogeneous extension
    double l2 = lambda * lambda;
    double nx2 = dot(x, x);
    double xa = pair(x, a);
    double num = 2.0 * std::pow(1.0 + l2 * nx2, 1.5) *
                 std::pow((1.0 + 2.0 * l2 * nx2) * na2 - l2 * xa * xa, 1.5);
    double den = (2.0 + 3.0 * l2 * nx2) * na2 - l2 * xa * xa;
    return num / den;
}

}  // namespace finsler

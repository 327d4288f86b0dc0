#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/fd.hpp"
#include "finsler/geometry.hpp"
#include "finsler/linalg.hpp"
#include "finsler/norms.hpp"

namespace finsler {

struct GeodesicState {
    Vec3 x;
    Vec3 v;
};

struct GeodesicPath {
    std::vector<double> times;
    std::vector<GeodesicState> states;
    std::string metric_label;
};

namespace detail {

inline std::vector<double> to_vec(Vec3 v) { return {v.x1, v.x2, v.x3}; }
inline Vec3 to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

/// Momentum p = d(phi^2/2)/dv, exact when the metric registers grad_v.
inline Vec3 momentum(const NormField& metric, const std::vector<double>& x,
                     const std::vector<double>& v, const FDScheme& scheme) {
    if (metric.grad_v) {
        double phi = metric.evaluate(x, v);
        auto g = metric.grad_v(x, v);
        return {phi * g[0], phi * g[1], phi * g[2]};
    }
    auto energy = [&](const std::vector<double>& vv) {
        double phi = metric.evaluate(x, vv);
        return 0.5 * phi * phi;
    };
    return {first_partial(energy, v, 0, scheme), first_partial(energy, v, 1, scheme),
            first_partial(energy, v, 2, scheme)};
}

inline Vec3 energy_x_gradient(const NormField& metric, const std::vector<double>& x,
                              const std::vector<double>& v, const FDScheme& scheme) {
    if (metric.grad_x) {
        double phi = metric.evaluate(x, v);
        auto g = metric.grad_x(x, v);
        return {phi * g[0], phi * g[1], phi * g[2]};
    }
    auto energy = [&](const std::vector<double>& xx) {
        double phi = metric.evaluate(xx, v);
        return 0.5 * phi * phi;
    };
    return {first_partial(energy, x, 0, scheme), first_partial(energy, x, 1, scheme),
            first_partial(energy, x, 2, scheme)};
}

}  // namespace detail

/// Acceleration of the energy (phi^2/2) parametrization: solves
/// H a = d_x E - (d2E/dv dx) v with H the v-Hessian of E. Derivatives of
/// the momentum are taken by the shared FD engine (on top of the exact
/// gradient when the metric registers one).
inline Vec3 spray_acceleration(const NormField& metric, Vec3 x, Vec3 v,
                               const FDScheme& scheme = {}) {
    if (norm(v) == 0.0) throw std::domain_error("spray undefined at v = 0");
    auto xs = detail::to_vec(x);
    auto vs = detail::to_vec(v);

    // columns of H = dp/dv and C = dp/dx by 4th-order differences of the
    // momentum, with one Richardson halving
    auto momentum_at = [&](const std::vector<double>& xx, const std::vector<double>& vv) {
        return detail::momentum(metric, xx, vv, scheme);
    };
    auto column = [&](bool wrt_v, std::size_t j, double h) {
        auto xx = xs;
        auto vv = vs;
        auto& c = wrt_v ? vv : xx;
        double cj = c[j];
        Vec3 acc{0, 0, 0};
        const double w[4] = {-1.0, 8.0, -8.0, 1.0};
        const double d[4] = {2.0, 1.0, -1.0, -2.0};
        for (int s = 0; s < 4; ++s) {
            c[j] = cj + d[s] * h;
            acc = acc + w[s] * momentum_at(xx, vv);
        }
        return (1.0 / (12.0 * h)) * acc;
    };
    auto column_richardson = [&](bool wrt_v, std::size_t j) {
        double h = fd_step(wrt_v ? vs[j] : xs[j], scheme.base_step);
        Vec3 coarse = column(wrt_v, j, h);
        if (!scheme.richardson) return coarse;
        Vec3 fine = column(wrt_v, j, h / 2);
        return (1.0 / 15.0) * (16.0 * fine - coarse);
    };

    SymMatrix h(3);
    Vec3 cv{0, 0, 0};  // (dp/dx) v
    for (std::size_t j = 0; j < 3; ++j) {
        Vec3 hcol = column_richardson(true, j);
        for (std::size_t i = 0; i < 3; ++i) h.at(i, j) = hcol[i];
        Vec3 ccol = column_richardson(false, j);  // dp/dx_j
        cv = cv + vs[j] * ccol;
    }
    // symmetrize H (it is a Hessian)
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) h.set(i, j, 0.5 * (h(i, j) + h(j, i)));

    Vec3 b = detail::energy_x_gradient(metric, xs, vs, scheme) - cv;
    std::vector<double> l;
    try {
        l = cholesky(h, "metric not strongly convex at state");
    } catch (const std::domain_error&) {
        throw std::domain_error("metric not strongly convex at state");
    }
    auto a = cholesky_solve(l, 3, {b.x1, b.x2, b.x3});
    return detail::to_vec3(a);
}

/// Classical fixed-step RK4 on (x', v') = (v, spray_acceleration).
inline GeodesicPath integrate_geodesic(const NormField& metric, Vec3 x0, Vec3 v0, double T,
                                       int steps, const FDScheme& scheme = {}) {
    if (norm(v0) == 0.0) throw std::domain_error("initial velocity must be nonzero");
    if (steps < 8) throw std::invalid_argument("at least 8 steps required");
    GeodesicPath path;
    path.metric_label = metric.label;
    double h = T / steps;
    Vec3 x = x0, v = v0;
    path.times.push_back(0.0);
    path.states.push_back({x, v});
    for (int k = 0; k < steps; ++k) {
        Vec3 k1x = v;
        Vec3 k1v = spray_acceleration(metric, x, v, scheme);
        Vec3 k2x = v + 0.5 * h * k1v;
        Vec3 k2v = spray_acceleration(metric, x + 0.5 * h * k1x, v + 0.5 * h * k1v, scheme);
        Vec3 k3x = v + 0.5 * h * k2v;
        Vec3 k3v = spray_acceleration(metric, x + 0.5 * h * k2x, v + 0.5 * h * k2v, scheme);
        Vec3 k4x = v + h * k3v;
        Vec3 k4v = spray_acceleration(metric, x + h * k3x, v + h * k3v, scheme);
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        path.times.push_back((k + 1) * h);
        path.states.push_back({x, v});
    }
    return path;
}

/// Relative drift of phi(x,v) along the path.
inline double speed_drift(const GeodesicPath& path, const NormField& metric) {
    if (path.states.empty()) return 0.0;
    double s0 = metric(path.states.front().x, path.states.front().v);
    double drift = 0.0;
    for (const auto& st : path.states)
        drift = std::max(drift, std::abs(metric(st.x, st.v) - s0) / s0);
    return drift;
}

/// Maximum distance of path points from the chord line through the first
/// point, normalized by the chord length. Straight paths give 0.
inline double straightness_deviation(const GeodesicPath& path) {
    if (path.states.size() < 3) throw std::invalid_argument("path needs at least 3 states");
    Vec3 p0 = path.states.front().x;
    Vec3 chord = path.states.back().x - p0;
    double len = norm(chord);
    if (len == 0.0) throw std::domain_error("degenerate path");
    Vec3 d = (1.0 / len) * chord;
    double worst = 0.0;
    for (const auto& st : path.states) {
        Vec3 r = st.x - p0;
        Vec3 perp = r - dot(r, d) * d;
        worst = std::max(worst, norm(perp));
    }
    return worst / len;
}

/// CSV export: t, x1, x2, x3, v1, v2, v3, speed.
inline void write_path_csv(std::ostream& os, const GeodesicPath& path, const NormField& metric) {
    os << "t,x1,x2,x3,v1,v2,v3,speed\n";
    os.precision(17);
    for (std::size_t k = 0; k < path.states.size(); ++k) {
        const auto& st = path.states[k];
        os << path.times[k] << ',' << st.x.x1 << ',' << st.x.x2 << ',' << st.x.x3 << ','
           << st.v.x1 << ',' << st.v.x2 << ',' << st.v.x3 << ',' << metric(st.x, st.v) << '\n';
    }
}

}  // namespace finsler

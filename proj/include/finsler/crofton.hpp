#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/fd.hpp"
#include "finsler/funk.hpp"
#include "finsler/geometry.hpp"
#include "finsler/mesh.hpp"
#include "finsler/norms.hpp"
#include "finsler/projectivity.hpp"
#include "finsler/rng.hpp"

namespace finsler {

/// Volumes of Euclidean unit balls: eps(1)=2, eps(2)=pi, eps(3)=4pi/3.
inline double euclidean_ball_volume(int k) {
    return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

// ---------------------------------------------------------------------------
// Monte Carlo Crofton estimate, Euclidean line measure du*dp
// ---------------------------------------------------------------------------

struct CroftonEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t degenerate_redraws = 0;
};

/// Samples directions uniformly on S^2 and foot points uniformly on the
/// disc of radius R in the orthogonal plane; returns 2*pi*R^2 * mean
/// intersection count, which is unbiased for the Euclidean mesh area.
/// Degenerate edge hits are redrawn from a split counter, never counted
/// fractionally.
inline CroftonEstimate crofton_area_euclidean(const SurfaceMesh& mesh, std::uint64_t n_samples,
                                              std::uint64_t seed, double bounding_radius) {
    if (mesh.bounding_radius() > bounding_radius + 1e-12)
        throw std::invalid_argument("bounding radius too small: mesh outside sampling slab");
    double bound = mesh.bounding_radius();
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t redraws = 0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        int count = 0;
        for (std::uint64_t retry = 0;; ++retry) {
            if (retry > 100) throw std::runtime_error("persistent degenerate hits; mesh broken?");
            CounterRng rng(seed, i, retry);
            Vec3 u = rng.unit_sphere();
            Vec3 p = rng.disc_in_plane(u, bounding_radius);
            if (norm(p) > bound) {  // cannot reach the mesh
                count = 0;
                break;
            }
            try {
                count = line_mesh_intersections(OrientedLine(u, p), mesh);
                break;
            } catch (const DegenerateHit&) {
                ++redraws;
            }
        }
        sum += count;
        sumsq += static_cast<double>(count) * count;
    }
    CroftonEstimate est;
    est.samples = n_samples;
    est.degenerate_redraws = redraws;
    double factor = 2.0 * std::numbers::pi * bounding_radius * bounding_radius;
    if (n_samples == 0) return est;
    double mean = sum / n_samples;
    est.estimate = factor * mean;
    if (n_samples > 1) {
        double var = (sumsq / n_samples - mean * mean) / (n_samples - 1);
        est.stderr_ = factor * std::sqrt(std::max(0.0, var));
    }
    return est;
}

// ---------------------------------------------------------------------------
// Smooth parametrized patches
// ---------------------------------------------------------------------------

struct SurfacePatch {
    std::function<Vec3(double, double)> chart;
    double s0 = 0, s1 = 1, t0 = 0, t1 = 1;
    // optional exact partials; FD of the chart otherwise
    std::function<Vec3(double, double)> d_s;
    std::function<Vec3(double, double)> d_t;

    Vec3 partial_s(double s, double t) const {
        if (d_s) return d_s(s, t);
        double h = 1e-5 * (1.0 + std::abs(s));
        return (1.0 / (12.0 * h)) *
               (-1.0 * chart(s + 2 * h, t) + 8.0 * chart(s + h, t) - 8.0 * chart(s - h, t) +
                chart(s - 2 * h, t));
    }
    Vec3 partial_t(double s, double t) const {
        if (d_t) return d_t(s, t);
        double h = 1e-5 * (1.0 + std::abs(t));
        return (1.0 / (12.0 * h)) *
               (-1.0 * chart(s, t + 2 * h) + 8.0 * chart(s, t + h) - 8.0 * chart(s, t - h) +
                chart(s, t - 2 * h));
    }
};

/// Polar chart of the flat unit disc in the x1x2-plane.
inline SurfacePatch flat_disc_patch() {
    SurfacePatch p;
    p.s0 = 0.0;
    p.s1 = 1.0;
    p.t0 = 0.0;
    p.t1 = 2.0 * std::numbers::pi;
    p.chart = [](double s, double t) { return Vec3{s * std::cos(t), s * std::sin(t), 0.0}; };
    p.d_s = [](double /*s*/, double t) { return Vec3{std::cos(t), std::sin(t), 0.0}; };
    p.d_t = [](double s, double t) { return Vec3{-s * std::sin(t), s * std::cos(t), 0.0}; };
    return p;
}

/// Spherical cap of the unit sphere with the given opening angle.
inline SurfacePatch spherical_cap_patch(double opening_angle) {
    SurfacePatch p;
    p.s0 = 0.0;
    p.s1 = opening_angle;
    p.t0 = 0.0;
    p.t1 = 2.0 * std::numbers::pi;
    p.chart = [](double s, double t) {
        return Vec3{std::sin(s) * std::cos(t), std::sin(s) * std::sin(t), std::cos(s)};
    };
    p.d_s = [](double s, double t) {
        return Vec3{std::cos(s) * std::cos(t), std::cos(s) * std::sin(t), -std::sin(s)};
    };
    p.d_t = [](double s, double t) {
        return Vec3{-std::sin(s) * std::sin(t), std::sin(s) * std::cos(t), 0.0};
    };
    return p;
}

struct SurfaceGrid {
    int n_s = 24;
    int n_t = 48;
};

struct FiberGrid {
    int n_alpha = 96;
    int n_beta = 96;
};

// ---------------------------------------------------------------------------
// Dual norms
// ---------------------------------------------------------------------------

/// phi*(x, xi) = max over unit v of <xi,v>/phi(x,v); compass search on the
/// sphere unless the metric registers an exact dual. The optional hint
/// warm-starts the search from a nearby maximizer.
inline double dual_norm3(const NormField& metric, const std::vector<double>& x,
                         const std::vector<double>& xi, Vec3* maximizer_hint = nullptr) {
    if (metric.dual) return metric.dual(x, xi);
    Vec3 xiv{xi[0], xi[1], xi[2]};
    auto g = [&](Vec3 v) {
        return (xiv.x1 * v.x1 + xiv.x2 * v.x2 + xiv.x3 * v.x3) /
               metric.evaluate(x, {v.x1, v.x2, v.x3});
    };

    Vec3 best;
    double best_val;
    double step;
    if (maximizer_hint && norm(*maximizer_hint) > 0.5) {
        best = normalized(*maximizer_hint);
        best_val = g(best);
        step = 0.1;
    } else {
        best = normalized(xiv);
        best_val = g(best);
        // coarse pass over a Fibonacci spiral
        const int m = 32;
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < m; ++k) {
            double z = 1.0 - 2.0 * (k + 0.5) / m;
            double r = std::sqrt(1.0 - z * z);
            double ang = golden * k;
            Vec3 v{r * std::cos(ang), r * std::sin(ang), z};
            double val = g(v);
            if (val > best_val) {
                best_val = val;
                best = v;
            }
        }
        step = 0.4;
    }

    while (step > 1e-7) {
        Frame f = orthonormal_frame(best);
        bool moved = false;
        for (Vec3 d : {f.b1, -1.0 * f.b1, f.b2, -1.0 * f.b2}) {
            Vec3 cand = normalized(best + step * d);
            double val = g(cand);
            if (val > best_val) {
                best_val = val;
                best = cand;
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    if (!(best_val > 0.0) || !std::isfinite(best_val))
        throw std::domain_error("dual-sphere parametrization failure: dual norm not computable");
    if (maximizer_hint) *maximizer_hint = best;
    return best_val;
}

namespace detail {

/// Norm induced on parameter velocities (alpha, beta) by a metric and a
/// tangent frame X_s, X_t.
struct Induced2D {
    const NormField* metric;
    std::vector<double> x;
    Vec3 xs, xt;

    double operator()(double a, double b) const {
        Vec3 v = a * xs + b * xt;
        return metric->evaluate(x, {v.x1, v.x2, v.x3});
    }
};

/// Lebesgue area of the dual unit disc B* of a 2-D norm F, by polar
/// integration (1/2) int r*(theta)^2 dtheta with r* = 1/F* and F* the
/// dual norm via maximization over sampled unit velocities plus
/// golden-section refinement around the best sample.
inline double dual_disc_area(const Induced2D& F, int samples = 1024, int theta_nodes = 2048,
                             int golden_steps = 30) {
    const double two_pi = 2.0 * std::numbers::pi;
    // boundary of the primal unit disc
    std::vector<double> bx(samples), by(samples);
    for (int k = 0; k < samples; ++k) {
        double psi = two_pi * k / samples;
        double c = std::cos(psi), s = std::sin(psi);
        double f = F(c, s);
        if (!(f > 0.0) || !std::isfinite(f))
            throw std::domain_error("induced norm degenerate on the tangent plane");
        bx[k] = c / f;
        by[k] = s / f;
    }
    // convexity cross-check on the sampled boundary polygon
    double scale = 0.0;
    for (int k = 0; k < samples; ++k) scale = std::max(scale, bx[k] * bx[k] + by[k] * by[k]);
    for (int k = 0; k < samples; ++k) {
        int k1 = (k + 1) % samples, k2 = (k + 2) % samples;
        double e1x = bx[k1] - bx[k], e1y = by[k1] - by[k];
        double e2x = bx[k2] - bx[k1], e2y = by[k2] - by[k1];
        if (e1x * e2y - e1y * e2x < -1e-9 * scale)
            throw std::domain_error("induced unit disc not convex");
    }

    auto support_dir = [&](double ux, double uy, double psi) {
        double c = std::cos(psi), s = std::sin(psi);
        return (ux * c + uy * s) / F(c, s);
    };

    // The maximizer angle is monotone in theta for a convex body, so a
    // single two-pointer sweep finds the best sample for every node.
    int k_best = 0;
    {
        double u0x = 1.0, u0y = 0.0, best = -1e300;
        for (int k = 0; k < samples; ++k) {
            double val = u0x * bx[k] + u0y * by[k];
            if (val > best) {
                best = val;
                k_best = k;
            }
        }
    }
    double sum_r2 = 0.0;
    for (int j = 0; j < theta_nodes; ++j) {
        double theta = two_pi * j / theta_nodes;
        double ux = std::cos(theta), uy = std::sin(theta);
        auto val_at = [&](int k) {
            int kk = ((k % samples) + samples) % samples;
            return ux * bx[kk] + uy * by[kk];
        };
        for (int guard = 0; guard < samples; ++guard) {
            if (val_at(k_best + 1) > val_at(k_best))
                ++k_best;
            else
                break;
        }
        k_best = ((k_best % samples) + samples) % samples;
        // golden-section refinement of psi around the best sample
        double lo = two_pi * (k_best - 1) / samples;
        double hi = two_pi * (k_best + 1) / samples;
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
        double fa = support_dir(ux, uy, a), fb = support_dir(ux, uy, b);
        for (int it = 0; it < golden_steps; ++it) {
            if (fa > fb) {
                hi = b;
                b = a;
                fb = fa;
                a = hi - inv_phi * (hi - lo);
                fa = support_dir(ux, uy, a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + inv_phi * (hi - lo);
                fb = support_dir(ux, uy, b);
            }
        }
        double fstar = std::max({fa, fb, val_at(k_best)});
        double rstar = 1.0 / fstar;
        sum_r2 += rstar * rstar;
    }
    return 0.5 * sum_r2 * (two_pi / theta_nodes);
}

/// Integral over the patch of the Lebesgue area of the fiberwise dual
/// unit disc, by the midpoint rule. Chart-degenerate cells contribute 0.
inline double codisc_leb_integral(const SurfacePatch& patch, const NormField& metric,
                                  const SurfaceGrid& grid, int dual_samples) {
    double ds = (patch.s1 - patch.s0) / grid.n_s;
    double dt = (patch.t1 - patch.t0) / grid.n_t;
    double total = 0.0;
    for (int i = 0; i < grid.n_s; ++i) {
        double s = patch.s0 + (i + 0.5) * ds;
        for (int j = 0; j < grid.n_t; ++j) {
            double t = patch.t0 + (j + 0.5) * dt;
            Vec3 xs = patch.partial_s(s, t);
            Vec3 xt = patch.partial_t(s, t);
            if (norm(cross(xs, xt)) < 1e-14) continue;  // zero-area chart cell
            Vec3 xp = patch.chart(s, t);
            Induced2D F{&metric, {xp.x1, xp.x2, xp.x3}, xs, xt};
            total += dual_disc_area(F, dual_samples) * ds * dt;
        }
    }
    return total;
}

}  // namespace detail

/// Holmes-Thompson area of the patch: in canonical chart coordinates the
/// symplectic volume of the unit co-disc bundle equals the integral of
/// LebArea(B*) over the chart, and the area is that integral divided by
/// the area of the Euclidean unit 2-ball.
inline double holmes_thompson_area(const SurfacePatch& patch, const NormField& metric,
                                   const SurfaceGrid& grid = {}, int dual_samples = 1024) {
    return detail::codisc_leb_integral(patch, metric, grid, dual_samples) / std::numbers::pi;
}

/// Integral of |omega_N^2| over the unit co-disc bundle of the patch;
/// the density |omega^2| equals twice canonical Lebesgue measure in
/// chart coordinates.
inline double codisc_integral(const SurfacePatch& patch, const NormField& metric,
                              const SurfaceGrid& grid = {}, int dual_samples = 1024) {
    return 2.0 * detail::codisc_leb_integral(patch, metric, grid, dual_samples);
}

/// Integral of |omega_M^2| over the 4-manifold {(x, xi): x on the patch,
/// phi*_x(xi) = 1}, with omega the standard form sum dxi_i ^ dx_i. The
/// fiber is parametrized by spherical angles of the covector direction;
/// derivatives of the embedding are taken by 4th-order differences of
/// the fiber table (ghost rows past the poles reuse the smooth
/// continuation of the spherical parametrization).
inline double cosphere_restriction_integral(const SurfacePatch& patch, const NormField& metric,
                                            const SurfaceGrid& grid_surface = {},
                                            const FiberGrid& grid_fiber = {}) {
    const double pi = std::numbers::pi;
    int na = grid_fiber.n_alpha, nb = grid_fiber.n_beta;
    double ha = pi / na, hb = 2.0 * pi / nb;
    double ds = (patch.s1 - patch.s0) / grid_surface.n_s;
    double dt = (patch.t1 - patch.t0) / grid_surface.n_t;

    auto sphere_dir = [](double alpha, double beta) {
        return Vec3{std::sin(alpha) * std::cos(beta), std::sin(alpha) * std::sin(beta),
                    std::cos(alpha)};
    };

    double total = 0.0;
    std::vector<Vec3> table;  // (na+4) x nb, rows i = -2 .. na+1
    for (int gi = 0; gi < grid_surface.n_s; ++gi) {
        double s = patch.s0 + (gi + 0.5) * ds;
        for (int gj = 0; gj < grid_surface.n_t; ++gj) {
            double t = patch.t0 + (gj + 0.5) * dt;
            Vec3 xs = patch.partial_s(s, t);
            Vec3 xt = patch.partial_t(s, t);
            if (norm(cross(xs, xt)) < 1e-14) continue;
            Vec3 xp = patch.chart(s, t);
            std::vector<double> x{xp.x1, xp.x2, xp.x3};

            table.assign(static_cast<std::size_t>(na + 4) * nb, Vec3{});
            Vec3 hint{0, 0, 0};
            for (int i = -2; i <= na + 1; ++i) {
                double alpha = (i + 0.5) * ha;
                Vec3 row_hint = hint;
                for (int j = 0; j < nb; ++j) {
                    double beta = (j + 0.5) * hb;
                    Vec3 u = sphere_dir(alpha, beta);
                    double fstar = dual_norm3(metric, x, {u.x1, u.x2, u.x3}, &row_hint);
                    if (j == 0) hint = row_hint;
                    table[static_cast<std::size_t>(i + 2) * nb + j] = (1.0 / fstar) * u;
                }
            }
            auto xi_at = [&](int i, int j) -> const Vec3& {
                return table[static_cast<std::size_t>(i + 2) * nb + ((j % nb) + nb) % nb];
            };
            double fiber_sum = 0.0;
            for (int i = 0; i < na; ++i) {
                for (int j = 0; j < nb; ++j) {
                    Vec3 xi_a = (1.0 / (12.0 * ha)) *
                                (-1.0 * xi_at(i + 2, j) + 8.0 * xi_at(i + 1, j) -
                                 8.0 * xi_at(i - 1, j) + xi_at(i - 2, j));
                    Vec3 xi_b = (1.0 / (12.0 * hb)) *
                                (-1.0 * xi_at(i, j + 2) + 8.0 * xi_at(i, j + 1) -
                                 8.0 * xi_at(i, j - 1) + xi_at(i, j - 2));
                    // omega^2 on the coordinate tangent vectors; the
                    // surface-derivative terms cancel because the fiber
                    // vectors have no x-component
                    double w = 2.0 * (-dot(xi_a, xs) * dot(xi_b, xt) +
                                      dot(xi_b, xs) * dot(xi_a, xt));
                    fiber_sum += std::abs(w);
                }
            }
            total += fiber_sum * ha * hb * ds * dt;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// No-Crofton certificate
// ---------------------------------------------------------------------------

struct CroftonCertificateRow {
    double t = 0;
    double residual_fd = 0;
    double fd_error = 0;
    double residual_closed = 0;
    bool matches_closed = false;
};

struct CroftonCertificate {
    double lambda = 0;
    std::vector<CroftonCertificateRow> rows;
    bool crofton_exists_consistent = true;
    std::string statement;
    std::string comparison_note =
        "residuals are compared against the closed form, not against zero; "
        "values below the FD error estimate are inconclusive on their own";
};

/// Evaluates the Berck residual of the Hausdorff area integrand of
/// phi_lambda along (t,t,t; 1,1,0) and reports nonexistence of a Crofton
/// formula when any residual exceeds 10x its FD error estimate.
inline CroftonCertificate no_crofton_certificate(double lambda,
                                                 const std::vector<double>& curve_samples,
                                                 const FDScheme& scheme = {}) {
    CroftonCertificate cert;
    cert.lambda = lambda;
    auto phi = area_integrand_phi_lambda(lambda);
    for (double t : curve_samples) {
        CroftonCertificateRow row;
        row.t = t;
        row.residual_fd = berck_residual(phi, {t, t, t}, {1, 1, 0}, scheme, &row.fd_error);
        row.residual_closed = main_theorem_residual_closed_form(lambda, t);
        row.matches_closed = std::abs(row.residual_fd - row.residual_closed) <=
                             std::max(1e-4 * std::abs(row.residual_closed),
                                      10.0 * row.fd_error + 1e-8);
        if (std::abs(row.residual_fd) > 10.0 * row.fd_error)
            cert.crofton_exists_consistent = false;
        cert.rows.push_back(row);
    }
    cert.statement = cert.crofton_exists_consistent
                         ? "consistent with Crofton formula"
                         : "no Crofton formula for the Hausdorff area integrand";
    return cert;
}

}  // namespace finsler

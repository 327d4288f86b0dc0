#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "finsler/crofton.hpp"
#include "finsler/mesh.hpp"
#include "finsler/norms.hpp"

using namespace finsler;

TEST_SUITE("crofton") {

TEST_CASE("Euclidean ball volumes") {
    CHECK(euclidean_ball_volume(1) == doctest::Approx(2.0));
    CHECK(euclidean_ball_volume(2) == doctest::Approx(std::numbers::pi));
    CHECK(euclidean_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("Monte Carlo disc area is within its error bars") {
    auto disc = make_disc_mesh(64);
    auto est = crofton_area_euclidean(disc, 20000, 42, disc.bounding_radius());
    CHECK(std::abs(est.estimate - std::numbers::pi) <= 4.0 * est.stderr_);
    CHECK(est.stderr_ > 0.0);
    CHECK(est.samples == 20000);
}

TEST_CASE("Monte Carlo sphere area is within its error bars") {
    auto sphere = make_sphere_mesh(2);
    auto est = crofton_area_euclidean(sphere, 20000, 42, 1.5);
    CHECK(std::abs(est.estimate - 4.0 * std::numbers::pi) <= 4.0 * est.stderr_);
}

TEST_CASE("estimator is unbiased across seeds") {
    auto disc = make_disc_mesh(64);
    int within = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto est = crofton_area_euclidean(disc, 5000, seed, disc.bounding_radius());
        if (std::abs(est.estimate - std::numbers::pi) <= 3.0 * est.stderr_) ++within;
    }
    CHECK(within >= 19);
}

TEST_CASE("identical seed gives identical estimates") {
    auto disc = make_disc_mesh(64);
    auto a = crofton_area_euclidean(disc, 2000, 7, disc.bounding_radius());
    auto b = crofton_area_euclidean(disc, 2000, 7, disc.bounding_radius());
    CHECK(a.estimate == b.estimate);
    CHECK(a.degenerate_redraws == b.degenerate_redraws);
}

TEST_CASE("sampling slab must cover the mesh") {
    auto disc = make_disc_mesh(64);
    CHECK_THROWS_WITH_AS(crofton_area_euclidean(disc, 10, 1, 0.5),
                         "bounding radius too small: mesh outside sampling slab",
                         std::invalid_argument);
}

TEST_CASE("dual norm of an anisotropic quadratic metric") {
    NormField metric;
    metric.label = "ellipsoid";
    metric.evaluate = [](const std::vector<double>&, const std::vector<double>& v) {
        return std::sqrt(v[0] * v[0] + 4.0 * v[1] * v[1] + 9.0 * v[2] * v[2]);
    };
    auto closed = [](double a, double b, double c) {
        return std::sqrt(a * a + b * b / 4.0 + c * c / 9.0);
    };
    Vec3 hint{0, 0, 0};
    const std::vector<std::array<double, 3>> covectors = {
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 2, 3}, {-0.4, 0.3, 1.1}};
    for (const auto& xi : covectors) {
        double got = dual_norm3(metric, {0, 0, 0}, {xi[0], xi[1], xi[2]}, &hint);
        double want = closed(xi[0], xi[1], xi[2]);
        CHECK(got == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("exact dual overrides are honored") {
    // the Euclidean factory registers an exact dual; compare with the
    // searched dual of the same norm without the override
    NormField plain;
    plain.evaluate = euclidean_norm().evaluate;
    double searched = dual_norm3(plain, {0, 0, 0}, {0.3, -0.4, 1.2});
    double exact = dual_norm3(euclidean_norm(), {0, 0, 0}, {0.3, -0.4, 1.2});
    CHECK(exact == doctest::Approx(norm(Vec3{0.3, -0.4, 1.2})));
    CHECK(searched == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("Holmes-Thompson area of the flat disc") {
    SurfaceGrid grid{8, 16};
    CHECK(holmes_thompson_area(flat_disc_patch(), euclidean_norm(), grid, 512) ==
          doctest::Approx(std::numbers::pi).epsilon(1e-3));
    CHECK(holmes_thompson_area(flat_disc_patch(), scaled_euclidean_norm(2.0), grid, 512) ==
          doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("codisc and cosphere integrals satisfy the reduction identity") {
    SurfaceGrid sg{6, 12};
    FiberGrid fg{48, 48};
    for (const auto& metric : {euclidean_norm(), scaled_euclidean_norm(2.0)}) {
        double codisc = codisc_integral(flat_disc_patch(), metric, sg, 512);
        double cosphere = cosphere_restriction_integral(flat_disc_patch(), metric, sg, fg);
        CHECK(cosphere == doctest::Approx(2.0 * codisc).epsilon(1e-2));
    }
    double euclid_codisc = codisc_integral(flat_disc_patch(), euclidean_norm(), sg, 512);
    CHECK(euclid_codisc ==
          doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("non-convex induced discs are rejected") {
    NormField bad;
    bad.label = "nonconvex";
    bad.evaluate = [](const std::vector<double>&, const std::vector<double>& v) {
        double q = v[0] * v[0] + 2.5 * v[1] * v[1] + v[2] * v[2];
        return q / std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    };
    CHECK_THROWS_AS(codisc_integral(flat_disc_patch(), bad, SurfaceGrid{2, 4}, 256),
                    std::domain_error);
}

TEST_CASE("certificate: lambda = 0 is consistent, lambda = 1 is not") {
    auto flat = no_crofton_certificate(0.0, {0.25, 0.5, 1.0, 2.0});
    CHECK(flat.crofton_exists_consistent);
    CHECK(flat.statement == "consistent with Crofton formula");
    for (const auto& row : flat.rows) CHECK(row.matches_closed);

    auto curved = no_crofton_certificate(1.0, {0.25, 0.5, 1.0, 2.0});
    CHECK_FALSE(curved.crofton_exists_consistent);
    CHECK(curved.statement == "no Crofton formula for the Hausdorff area integrand");
    CHECK_FALSE(curved.comparison_note.empty());
    for (const auto& row : curved.rows) {
        CHECK(row.matches_closed);
        CHECK(std::abs(row.residual_fd) > 10.0 * row.fd_error);
    }
}

}  // TEST_SUITE

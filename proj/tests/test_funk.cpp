#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "finsler/funk.hpp"
#include "finsler/norms.hpp"
#include "finsler/rng.hpp"

using namespace finsler;

TEST_SUITE("funk") {

TEST_CASE("transform of a constant is the circle length") {
    auto f = [](Vec3) { return 1.0; };
    CHECK(funk_transform(f, Vec3{0, 0, 1}) == doctest::Approx(2.0 * std::numbers::pi));
}

TEST_CASE("transform matches the closed-form oracle on random draws") {
    GreatCircleQuadrature quad{512};
    for (int k = 0; k < 50; ++k) {
        CounterRng rng(9, k, 910);
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
        double numeric = funk_transform(f, a, quad);
        double closed = funk_closed_form(s, lambda, x, a);
        CHECK(std::abs(numeric - closed) <= 1e-8 * std::abs(closed));
    }
}

TEST_CASE("transform is independent of the in-plane frame") {
    Vec3 x{0.3, -0.7, 0.2};
    auto f = [&](Vec3 v) {
        double q = dot(x, v);
        double d = 1.21 + q * q;
        return 1.0 / (d * d);
    };
    Vec3 a = normalized(Vec3{1, 2, -1});
    GreatCircleQuadrature quad{512};
    Frame base = orthonormal_frame(a);
    double reference = funk_transform(f, a, quad, base);
    // rotate the frame by arbitrary angles within the plane
    for (double ang : {0.17, 1.0, 2.5, 4.4}) {
        Frame rotated{std::cos(ang) * base.b1 + std::sin(ang) * base.b2,
                      -std::sin(ang) * base.b1 + std::cos(ang) * base.b2};
        CHECK(funk_transform(f, a, quad, rotated) == doctest::Approx(reference).epsilon(1e-12));
    }
}

TEST_CASE("quadrature converges spectrally in the node count") {
    Vec3 x{0.9, 0.4, -0.3};
    auto f = [&](Vec3 v) {
        double q = dot(x, v);
        double d = 2.0 + 3.0 * q * q;
        return 1.0 / (d * d);
    };
    Vec3 a = normalized(Vec3{0.2, -1.0, 0.5});
    double closed = funk_closed_form(std::sqrt(2.0), std::sqrt(3.0), x, a);
    double coarse = funk_transform(f, a, GreatCircleQuadrature{64});
    double fine = funk_transform(f, a, GreatCircleQuadrature{512});
    CHECK(std::abs(fine - closed) <= std::abs(coarse - closed) + 1e-15);
    CHECK(std::abs(fine - closed) <= 1e-10 * std::abs(closed));
}

TEST_CASE("transform requires a unit direction and positive s") {
    auto f = [](Vec3) { return 1.0; };
    CHECK_THROWS_AS(funk_transform(f, Vec3{0, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(funk_closed_form(0.0, 1.0, Vec3{}, Vec3{0, 0, 1}), std::domain_error);
}

TEST_CASE("radial_of_norm rejects degenerate metrics") {
    NormField zero;
    zero.evaluate = [](const std::vector<double>&, const std::vector<double>&) { return 0.0; };
    CHECK_THROWS_WITH_AS(radial_of_norm(zero, Vec3{}), "not a norm at this point",
                         std::domain_error);
}

TEST_CASE("numeric area integrand matches the closed form") {
    GreatCircleQuadrature quad{512};
    for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
        NormField metric = phi_lambda_norm(lambda);
        for (int k = 0; k < 30; ++k) {
            CounterRng rng(9, k, 911);
            Vec3 x = rng.ball(2.0);
            Bivec3 a = Bivec3::from_coords(rng.uniform(0.2, 3.0) * rng.unit_sphere());
            double numeric = hausdorff_area_integrand_numeric(metric, x, a, quad);
            double closed = phi_lambda_area_integrand(lambda, x, a);
            CHECK(std::abs(numeric - closed) <= 1e-7 * std::abs(closed));
        }
    }
}

TEST_CASE("area integrand is 1-homogeneous in the bivector") {
    CounterRng rng(9, 77, 912);
    Vec3 x = rng.ball(1.5);
    Bivec3 a = Bivec3::from_coords(rng.unit_sphere());
    for (double c : {0.25, 2.0, 10.0}) {
        CHECK(phi_lambda_area_integrand(1.2, x, c * a) ==
              doctest::Approx(c * phi_lambda_area_integrand(1.2, x, a)));
    }
}

TEST_CASE("lambda = 0 degenerates to the Euclidean bivector norm") {
    for (int k = 0; k < 10000; ++k) {
        CounterRng rng(9, k, 913);
        Vec3 x = rng.ball(3.0);
        Bivec3 a = Bivec3::from_coords(rng.uniform(0.01, 5.0) * rng.unit_sphere());
        double got = phi_lambda_area_integrand(0.0, x, a);
        CHECK(std::abs(got - norm(a)) <= 1e-12 * norm(a));
    }
}

TEST_CASE("area integrand rejects a = 0 on the numeric route") {
    CHECK_THROWS_AS(hausdorff_area_integrand_numeric(phi_lambda_norm(1.0), Vec3{}, Bivec3{}),
                    std::domain_error);
    CHECK(phi_lambda_area_integrand(1.0, Vec3{1, 1, 1}, Bivec3{}) == 0.0);
}

}  // TEST_SUITE

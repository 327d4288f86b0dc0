#include <doctest.h>

#include "finsler/geometry.hpp"

using namespace finsler;

TEST_SUITE("geometry") {

TEST_CASE("wedge has cross-product coordinates") {
    Vec3 v{1, 2, 3}, w{-2, 0, 5};
    Bivec3 a = wedge(v, w);
    Vec3 c = cross(v, w);
    CHECK(a.a1 == c.x1);
    CHECK(a.a2 == c.x2);
    CHECK(a.a3 == c.x3);
}

TEST_CASE("wedge is antisymmetric and bilinear") {
    Vec3 v{0.3, -1.1, 2.0}, w{4.0, 0.5, -0.7};
    Bivec3 vw = wedge(v, w);
    Bivec3 wv = wedge(w, v);
    CHECK(vw.a1 == doctest::Approx(-wv.a1));
    CHECK(vw.a2 == doctest::Approx(-wv.a2));
    CHECK(vw.a3 == doctest::Approx(-wv.a3));
    Bivec3 scaled = wedge(2.5 * v, w);
    CHECK(scaled.a1 == doctest::Approx(2.5 * vw.a1));
    CHECK(norm(wedge(v, v)) == doctest::Approx(0.0));
}

TEST_CASE("pair computes the determinant coefficient") {
    // pair(u, wedge(v, w)) = det[u v w]
    Vec3 u{1, 0, 2}, v{0, 1, 1}, w{3, -1, 0};
    double det = u.x1 * (v.x2 * w.x3 - v.x3 * w.x2) - u.x2 * (v.x1 * w.x3 - v.x3 * w.x1) +
                 u.x3 * (v.x1 * w.x2 - v.x2 * w.x1);
    CHECK(pair(u, wedge(v, w)) == doctest::Approx(det));
}

TEST_CASE("orthonormal_frame spans the orthogonal plane") {
    for (Vec3 a : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, normalized(Vec3{1, 2, 3}),
                   normalized(Vec3{-0.3, 0.1, 0.05})}) {
        Frame f = orthonormal_frame(a);
        CHECK(norm(f.b1) == doctest::Approx(1.0));
        CHECK(norm(f.b2) == doctest::Approx(1.0));
        CHECK(dot(f.b1, f.b2) == doctest::Approx(0.0));
        CHECK(dot(f.b1, a) == doctest::Approx(0.0));
        CHECK(dot(f.b2, a) == doctest::Approx(0.0));
        // right-handed: b1 x b2 = a
        Vec3 n = cross(f.b1, f.b2);
        CHECK(norm(n - a) == doctest::Approx(0.0));
    }
}

TEST_CASE("orthonormal_frame tie-breaking is deterministic") {
    // all components equal: ties go to the lowest index, so e = e1
    Vec3 a = normalized(Vec3{1, 1, 1});
    Frame f = orthonormal_frame(a);
    Vec3 expected = normalized(cross(Vec3{1, 0, 0}, a));
    CHECK(norm(f.b1 - expected) == doctest::Approx(0.0));
}

TEST_CASE("normalized rejects the zero vector") {
    CHECK_THROWS_AS(normalized(Vec3{0, 0, 0}), std::domain_error);
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "finsler/mesh.hpp"

using namespace finsler;

TEST_SUITE("mesh") {

TEST_CASE("oriented lines validate their invariants") {
    CHECK_THROWS_AS(OrientedLine(Vec3{0, 0, 2}, Vec3{}), std::invalid_argument);
    CHECK_THROWS_AS(OrientedLine(Vec3{0, 0, 1}, Vec3{0, 0, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(OrientedLine(Vec3{0, 0, 1}, Vec3{0.3, 0.4, 0}));
}

TEST_CASE("reference meshes have exactly normalized areas") {
    CHECK(make_disc_mesh().area() == doctest::Approx(std::numbers::pi).epsilon(1e-13));
    CHECK(make_sphere_mesh().area() == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-13));
    CHECK_NOTHROW(make_disc_mesh().validate());
    CHECK_NOTHROW(make_sphere_mesh().validate());
}

TEST_CASE("line through the disc interior counts one crossing") {
    auto disc = make_disc_mesh(64);
    OrientedLine hit(Vec3{0, 0, 1}, Vec3{0.31, 0.17, 0});
    CHECK(line_mesh_intersections(hit, disc) == 1);
    OrientedLine miss(Vec3{0, 0, 1}, Vec3{2.0, 0, 0});
    CHECK(line_mesh_intersections(miss, disc) == 0);
}

TEST_CASE("generic line through the sphere counts two crossings") {
    auto sphere = make_sphere_mesh(2);
    OrientedLine chord(Vec3{0, 0, 1}, Vec3{0.21, 0.13, 0});
    CHECK(line_mesh_intersections(chord, sphere) == 2);
    OrientedLine outside(Vec3{0, 0, 1}, Vec3{1.5, 0, 0});
    CHECK(line_mesh_intersections(outside, sphere) == 0);
}

TEST_CASE("both directions of the unoriented line are counted") {
    // the sphere crossings lie at z < 0 and z > 0; a foot point in the
    // equatorial plane must see both
    auto sphere = make_sphere_mesh(2);
    OrientedLine up(Vec3{0, 0, 1}, Vec3{0.1, 0.1, 0});
    OrientedLine down(Vec3{0, 0, -1}, Vec3{0.1, 0.1, 0});
    CHECK(line_mesh_intersections(up, sphere) == line_mesh_intersections(down, sphere));
}

TEST_CASE("edge hits raise DegenerateHit") {
    SurfaceMesh tri;
    tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    tri.triangles = {{0, 1, 2}};
    // through the interior: a crossing
    CHECK(line_mesh_intersections(OrientedLine(Vec3{0, 0, 1}, Vec3{0.25, 0.25, 0}), tri) == 1);
    // exactly on the hypotenuse
    CHECK_THROWS_AS(line_mesh_intersections(OrientedLine(Vec3{0, 0, 1}, Vec3{0.5, 0.5, 0}), tri),
                    DegenerateHit);
    // exactly on a vertex
    CHECK_THROWS_AS(line_mesh_intersections(OrientedLine(Vec3{0, 0, 1}, Vec3{0, 0, 0}), tri),
                    DegenerateHit);
    // in the triangle's plane
    CHECK_THROWS_AS(line_mesh_intersections(OrientedLine(Vec3{1, 0, 0}, Vec3{0, 0.25, 0}), tri),
                    DegenerateHit);
    // parallel to the plane but far from it: clean miss
    CHECK(line_mesh_intersections(OrientedLine(Vec3{1, 0, 0}, Vec3{0, 0.25, 5}), tri) == 0);
}

TEST_CASE("OFF round trip preserves the mesh") {
    auto mesh = make_sphere_mesh(1);
    std::stringstream buffer;
    save_off(buffer, mesh);
    auto loaded = load_off(buffer);
    REQUIRE(loaded.vertices.size() == mesh.vertices.size());
    REQUIRE(loaded.triangles.size() == mesh.triangles.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        CHECK(norm(loaded.vertices[i] - mesh.vertices[i]) == 0.0);
    CHECK(loaded.triangles == mesh.triangles);
    CHECK(loaded.area() == doctest::Approx(mesh.area()));
}

TEST_CASE("OFF loader rejects malformed input") {
    std::stringstream not_off("PLY\n1 0 0\n0 0 0\n");
    CHECK_THROWS_AS(load_off(not_off), std::runtime_error);
    std::stringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
    CHECK_THROWS_AS(load_off(quad), std::runtime_error);
}

TEST_CASE("validate flags degenerate triangles") {
    SurfaceMesh bad;
    bad.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    bad.triangles = {{0, 1, 2}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

}  // TEST_SUITE

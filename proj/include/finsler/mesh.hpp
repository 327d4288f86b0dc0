#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/geometry.hpp"

namespace finsler {

/// Oriented line: unit direction u plus foot point p orthogonal to u.
struct OrientedLine {
    Vec3 u;
    Vec3 p;

    OrientedLine(Vec3 direction, Vec3 foot) : u(direction), p(foot) {
        if (std::abs(norm(u) - 1.0) > 1e-10)
            throw std::invalid_argument("line direction must be a unit vector");
        if (std::abs(dot(p, u)) > 1e-10)
            throw std::invalid_argument("line foot point must be orthogonal to the direction");
    }
};

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    bool oriented = true;

    double area() const {
        double total = 0.0;
        for (const auto& t : triangles) {
            Vec3 e1 = vertices[t[1]] - vertices[t[0]];
            Vec3 e2 = vertices[t[2]] - vertices[t[0]];
            total += 0.5 * norm(cross(e1, e2));
        }
        return total;
    }

    double bounding_radius() const {
        double r = 0.0;
        for (const auto& v : vertices) r = std::max(r, norm(v));
        return r;
    }

    void validate() const {
        for (const auto& t : triangles) {
            Vec3 e1 = vertices[t[1]] - vertices[t[0]];
            Vec3 e2 = vertices[t[2]] - vertices[t[0]];
            if (0.5 * norm(cross(e1, e2)) <= 1e-12)
                throw std::invalid_argument("mesh contains a degenerate triangle");
        }
    }
};

/// Thrown when a line hits within the barycentric guard band of a
/// triangle edge; the Monte Carlo sampler consumes it and redraws.
struct DegenerateHit : std::runtime_error {
    DegenerateHit() : std::runtime_error("degenerate line-triangle hit, resample") {}
};

/// Number of triangle interiors the full line (both parameter signs)
/// crosses transversally.
inline int line_mesh_intersections(const OrientedLine& line, const SurfaceMesh& mesh) {
    constexpr double kEdgeGuard = 1e-9;
    int count = 0;
    for (const auto& t : mesh.triangles) {
        Vec3 v0 = mesh.vertices[t[0]];
        Vec3 e1 = mesh.vertices[t[1]] - v0;
        Vec3 e2 = mesh.vertices[t[2]] - v0;
        Vec3 pvec = cross(line.u, e2);
        double det = dot(e1, pvec);
        double scale = norm(e1) * norm(e2);
        if (std::abs(det) <= 1e-12 * scale) {
            // near-parallel: only ambiguous if the line is also near the
            // triangle's plane
            Vec3 n = cross(e1, e2);
            double d = dot(line.p - v0, n) / norm(n);
            if (std::abs(d) <= 1e-9) throw DegenerateHit{};
            continue;
        }
        double inv = 1.0 / det;
        Vec3 tvec = line.p - v0;
        double bu = dot(tvec, pvec) * inv;
        Vec3 qvec = cross(tvec, e1);
        double bv = dot(line.u, qvec) * inv;
        bool inside = bu > kEdgeGuard && bv > kEdgeGuard && bu + bv < 1.0 - kEdgeGuard;
        bool near_edge = bu > -kEdgeGuard && bv > -kEdgeGuard && bu + bv < 1.0 + kEdgeGuard;
        if (inside)
            ++count;
        else if (near_edge)
            throw DegenerateHit{};
    }
    return count;
}

// ---- ASCII OFF input/output ----

inline SurfaceMesh load_off(std::istream& in) {
    std::string token;
    if (!(in >> token) || token != "OFF") throw std::runtime_error("not an OFF file");
    std::size_t nv = 0, nf = 0, ne = 0;
    if (!(in >> nv >> nf >> ne)) throw std::runtime_error("malformed OFF counts line");
    SurfaceMesh mesh;
    mesh.vertices.resize(nv);
    for (std::size_t i = 0; i < nv; ++i)
        if (!(in >> mesh.vertices[i].x1 >> mesh.vertices[i].x2 >> mesh.vertices[i].x3))
            throw std::runtime_error("malformed OFF vertex line");
    for (std::size_t i = 0; i < nf; ++i) {
        int k = 0;
        if (!(in >> k) || k != 3) throw std::runtime_error("OFF faces must be triangles");
        std::array<int, 3> tri{};
        if (!(in >> tri[0] >> tri[1] >> tri[2])) throw std::runtime_error("malformed OFF face line");
        mesh.triangles.push_back(tri);
    }
    return mesh;
}

inline SurfaceMesh load_off(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    return load_off(in);
}

inline void save_off(std::ostream& os, const SurfaceMesh& mesh) {
    os << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
    os.precision(17);
    for (const auto& v : mesh.vertices) os << v.x1 << ' ' << v.x2 << ' ' << v.x3 << '\n';
    for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

// ---- reference meshes ----

/// Triangle fan over a regular polygon in the x1x2-plane, scaled so the
/// mesh area is exactly the target (pi for the unit disc).
inline SurfaceMesh make_disc_mesh(int segments = 512, double target_area = std::numbers::pi) {
    SurfaceMesh mesh;
    mesh.vertices.push_back({0, 0, 0});
    double polygon_area = 0.5 * segments * std::sin(2.0 * std::numbers::pi / segments);
    double r = std::sqrt(target_area / polygon_area);
    for (int k = 0; k < segments; ++k) {
        double t = 2.0 * std::numbers::pi * k / segments;
        mesh.vertices.push_back({r * std::cos(t), r * std::sin(t), 0});
    }
    for (int k = 0; k < segments; ++k)
        mesh.triangles.push_back({0, 1 + k, 1 + (k + 1) % segments});
    return mesh;
}

/// Icosphere with the given subdivision level, scaled so the mesh area is
/// exactly the target (4*pi for the unit sphere).
inline SurfaceMesh make_sphere_mesh(int subdivisions = 3,
                                    double target_area = 4.0 * std::numbers::pi) {
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
        {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
    for (auto& v : verts) v = normalized(v);
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            std::pair<int, int> key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            verts.push_back(normalized(0.5 * (verts[a] + verts[b])));
            int idx = static_cast<int>(verts.size()) - 1;
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        faces = std::move(next);
    }

    SurfaceMesh mesh;
    mesh.vertices = std::move(verts);
    mesh.triangles = std::move(faces);
    double scale = std::sqrt(target_area / mesh.area());
    for (auto& v : mesh.vertices) v = scale * v;
    return mesh;
}

}  // namespace finsler

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace finsler {

struct Vec3 {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;

    double operator[](std::size_t i) const { return i == 0 ? x1 : (i == 1 ? x2 : x3); }
    double& operator[](std::size_t i) { return i == 0 ? x1 : (i == 1 ? x2 : x3); }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3}; }
inline Vec3 operator*(double t, Vec3 a) { return {t * a.x1, t * a.x2, t * a.x3}; }
inline Vec3 operator*(Vec3 a, double t) { return t * a; }
inline Vec3 operator-(Vec3 a) { return {-a.x1, -a.x2, -a.x3}; }

inline double dot(Vec3 a, Vec3 b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, a.x1 * b.x2 - a.x2 * b.x1};
}

inline Vec3 normalized(Vec3 a) {
    double n = norm(a);
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    return (1.0 / n) * a;
}

/// Coordinates with respect to the basis e2^e3, e3^e1, e1^e2 of the
/// bivector space; under this identification wedge(v,w) has the
/// coordinates of the cross product v x w.
struct Bivec3 {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;

    Vec3 coords() const { return {a1, a2, a3}; }
    static Bivec3 from_coords(Vec3 c) { return {c.x1, c.x2, c.x3}; }
};

inline Bivec3 operator+(Bivec3 a, Bivec3 b) { return {a.a1 + b.a1, a.a2 + b.a2, a.a3 + b.a3}; }
inline Bivec3 operator*(double t, Bivec3 a) { return {t * a.a1, t * a.a2, t * a.a3}; }
inline double norm(Bivec3 a) { return std::sqrt(a.a1 * a.a1 + a.a2 * a.a2 + a.a3 * a.a3); }

inline Bivec3 wedge(Vec3 v, Vec3 w) { return Bivec3::from_coords(cross(v, w)); }

/// Coefficient of v ^ a on e1^e2^e3; equals the inner product of the
/// coordinate triples.
inline double pair(Vec3 v, Bivec3 a) { return v.x1 * a.a1 + v.x2 * a.a2 + v.x3 * a.a3; }

/// Deterministic orthonormal frame {b1, b2} of the plane orthogonal to
/// the unit vector a: b1 = normalize(e_k x a) with k the index of the
/// smallest-magnitude component of a (ties go to the lowest index),
/// b2 = a x b1.
struct Frame {
    Vec3 b1, b2;
};

inline Frame orthonormal_frame(Vec3 a) {
    double m1 = std::abs(a.x1), m2 = std::abs(a.x2), m3 = std::abs(a.x3);
    Vec3 e;
    if (m1 <= m2 && m1 <= m3)
        e = {1, 0, 0};
    else if (m2 <= m3)
        e = {0, 1, 0};
    else
        e = {0, 0, 1};
    Vec3 b1 = normalized(cross(e, a));
    Vec3 b2 = cross(a, b1);
    return {b1, b2};
}

}  // namespace finsler

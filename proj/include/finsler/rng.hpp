#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "finsler/geometry.hpp"

namespace finsler {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based generator: the stream for (seed, counter, lane) is a
/// pure function of its arguments, so sample i is independent of
/// evaluation order and safe to draw concurrently.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t counter, std::uint64_t lane = 0)
        : base_(splitmix64(splitmix64(splitmix64(seed) + counter) + lane)) {}

    std::uint64_t next_u64() { return splitmix64(base_ + word_++); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    Vec3 unit_sphere() {
        double z = uniform(-1.0, 1.0);
        double phi = uniform(0.0, 2.0 * std::numbers::pi);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

    /// Uniform in the ball of the given radius.
    Vec3 ball(double radius) {
        double r = radius * std::cbrt(uniform());
        return r * unit_sphere();
    }

    /// Uniform on the disc of the given radius in the plane orthogonal to
    /// the unit vector u.
    Vec3 disc_in_plane(Vec3 u, double radius) {
        Frame f = orthonormal_frame(u);
        double r = radius * std::sqrt(uniform());
        double ang = uniform(0.0, 2.0 * std::numbers::pi);
        return r * std::cos(ang) * f.b1 + r * std::sin(ang) * f.b2;
    }

private:
    std::uint64_t base_;
    std::uint64_t word_ = 0;
};

}  // namespace finsler

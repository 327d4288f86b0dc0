#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace finsler {

/// Finite-difference settings shared by every derivative in the toolkit:
/// 4th-order central stencils, per-coordinate step h_i = base_step*(1+|c_i|),
/// one Richardson halving.
struct FDScheme {
    double base_step = 1e-2;
    bool richardson = true;
};

inline double fd_step(double coordinate, double base_step) {
    return base_step * (1.0 + std::abs(coordinate));
}

namespace detail {

/// 4th-order central first derivative in coordinate j; restores c[j].
template <class F>
double partial4(F&& f, std::vector<double>& c, std::size_t j, double h) {
    double cj = c[j];
    c[j] = cj + 2 * h;
    double f2p = f(c);
    c[j] = cj + h;
    double f1p = f(c);
    c[j] = cj - h;
    double f1m = f(c);
    c[j] = cj - 2 * h;
    double f2m = f(c);
    c[j] = cj;
    return (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h);
}

template <class F>
double mixed_once(F&& f, const std::vector<double>& point, std::size_t i, std::size_t j,
                  double hi, double hj) {
    auto inner = [&](const std::vector<double>& c) {
        std::vector<double> cc = c;
        return partial4(f, cc, j, hj);
    };
    std::vector<double> c = point;
    return partial4(inner, c, i, hi);
}

}  // namespace detail

/// d^2 f / dc_i dc_j by nested 4th-order central differences with one
/// Richardson halving. The optional error estimate is
/// |extrapolated - coarse| / 15.
template <class F>
double mixed_second(F&& f, const std::vector<double>& point, std::size_t i, std::size_t j,
                    const FDScheme& scheme = {}, double* error_estimate = nullptr) {
    double hi = fd_step(point[i], scheme.base_step);
    double hj = fd_step(point[j], scheme.base_step);
    double coarse = detail::mixed_once(f, point, i, j, hi, hj);
    if (!scheme.richardson) {
        if (error_estimate) *error_estimate = 0.0;
        return coarse;
    }
    double fine = detail::mixed_once(f, point, i, j, hi / 2, hj / 2);
    double extrapolated = (16.0 * fine - coarse) / 15.0;
    if (error_estimate) *error_estimate = std::abs(fine - coarse) / 15.0;
    return extrapolated;
}

/// First partial with the same stencil/step policy (no Richardson; the
/// 4th-order stencil is already well past the accuracy needed here).
template <class F>
double first_partial(F&& f, const std::vector<double>& point, std::size_t i,
                     const FDScheme& scheme = {}) {
    std::vector<double> c = point;
    return detail::partial4(f, c, i, fd_step(point[i], scheme.base_step));
}

}  // namespace finsler

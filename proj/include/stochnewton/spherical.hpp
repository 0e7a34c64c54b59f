#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "stochnewton/polynomial.hpp"

namespace stochnewton {

// Point on the Riemann sphere: a finite complex value or infinity.
struct SphericalPoint {
    cplx value{0.0, 0.0};
    bool infinite = false;

    static SphericalPoint inf() { return SphericalPoint{cplx(0, 0), true}; }
    static SphericalPoint at(cplx z) { return SphericalPoint{z, false}; }

    bool operator==(const SphericalPoint& o) const {
        if (infinite || o.infinite) return infinite == o.infinite;
        return value == o.value;
    }
};

// Chordal distance d(z,w) = 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)), at most 2.
// |z|^2 overflows past ~1e154; the metric is invariant under z -> 1/z, so
// oversized arguments are folded back through the inversion.
inline double chordal_distance(cplx z, cplx w) {
    double az = std::abs(z), aw = std::abs(w);
    if (!(az < 1e150)) {
        if (!(aw < 1e150)) {
            z = 1.0 / z;  // both huge: compare the inverses directly
            w = 1.0 / w;
        } else {
            cplx t = 1.0 / z;
            return 2.0 * std::abs(1.0 - w * t) /
                   std::sqrt((1.0 + std::norm(t)) * (1.0 + std::norm(w)));
        }
    } else if (!(aw < 1e150)) {
        cplx t = 1.0 / w;
        return 2.0 * std::abs(1.0 - z * t) /
               std::sqrt((1.0 + std::norm(t)) * (1.0 + std::norm(z)));
    }
    double nz = std::norm(z), nw = std::norm(w);
    return 2.0 * std::abs(z - w) / std::sqrt((1.0 + nz) * (1.0 + nw));
}

inline double chordal_distance_to_inf(cplx z) {
    return 2.0 / std::sqrt(1.0 + std::norm(z));
}

inline double chordal_distance(const SphericalPoint& a, const SphericalPoint& b) {
    if (a.infinite && b.infinite) return 0.0;
    if (a.infinite) return chordal_distance_to_inf(b.value);
    if (b.infinite) return chordal_distance_to_inf(a.value);
    return chordal_distance(a.value, b.value);
}

// Norm of the derivative with respect to the spherical metric at a finite
// point z with finite image f(z): |f'(z)| (1+|z|^2) / (1+|f(z)|^2).
inline double sphere_deriv_norm(cplx f_prime, cplx z, cplx f_z) {
    return std::abs(f_prime) * (1.0 + std::norm(z)) / (1.0 + std::norm(f_z));
}

// Same norm with a pole at z (f(z) = infinity), computed in the 1/f chart.
inline double sphere_deriv_norm_at_pole(cplx f_prime_over_f_sq, cplx z) {
    return std::abs(f_prime_over_f_sq) * (1.0 + std::norm(z));
}

}  // namespace stochnewton

#pragma once

// Roots of the spectral cubic  xi^3 - z xi^2 + (1 - a^2) xi + z a^2 = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace extsrc {

using cplx = std::complex<double>;

struct CubicRoots {
    // Deterministic ordering (by real part, then imaginary part) unless
    // relabelled by the sheet tracker.
    std::array<cplx, 3> roots;
    bool near_double = false;  // two roots closer than the collision scale
};

namespace detail {

inline cplx cubic_poly(cplx xi, cplx z, double a) {
    double a2 = a * a;
    return ((xi - z) * xi + (1.0 - a2)) * xi + z * a2;
}

inline cplx cubic_poly_deriv(cplx xi, cplx z, double a) {
    return (3.0 * xi - 2.0 * z) * xi + (1.0 - a * a);
}

}  // namespace detail

// Cardano closed form followed by one Newton polish per root. The polish
// restores full double precision near branch points where the closed form
// loses accuracy.
inline CubicRoots solve_cubic(cplx z, double a) {
    double a2 = a * a;
    // Monic coefficients: xi^3 + b xi^2 + c xi + d.
    cplx b = -z;
    cplx c = cplx(1.0 - a2);
    cplx d = z * a2;

    // Depressed cubic t^3 + p t + q with xi = t - b/3.
    cplx shift = b / 3.0;
    cplx p = c - b * b / 3.0;
    cplx q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    cplx disc = q * q / 4.0 + p * p * p / 27.0;
    cplx sq = std::sqrt(disc);
    cplx u3 = -q / 2.0 + sq;
    // Pick the larger magnitude branch for numerical stability.
    if (std::abs(-q / 2.0 - sq) > std::abs(u3)) u3 = -q / 2.0 - sq;

    std::array<cplx, 3> t;
    if (std::abs(u3) == 0.0) {
        t = {cplx(0), cplx(0), cplx(0)};
        if (std::abs(p) > 0.0) {
            // q == 0: roots of t^3 + p t = 0.
            cplx r = std::sqrt(-p);
            t = {cplx(0), r, -r};
        }
    } else {
        cplx u = std::pow(u3, 1.0 / 3.0);
        const cplx w(-0.5, 0.8660254037844386467637231707529362);
        std::array<cplx, 3> us = {u, u * w, u * std::conj(w)};
        for (int k = 0; k < 3; ++k) t[k] = us[k] - p / (3.0 * us[k]);
    }

    CubicRoots out;
    for (int k = 0; k < 3; ++k) {
        cplx xi = t[k] - shift;
        for (int it = 0; it < 2; ++it) {
            cplx f = detail::cubic_poly(xi, z, a);
            cplx df = detail::cubic_poly_deriv(xi, z, a);
            if (std::abs(df) > 1e-300) xi -= f / df;
        }
        out.roots[k] = xi;
    }

    // Deterministic order: by real part, then imaginary part.
    auto less = [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    };
    std::sort(out.roots.begin(), out.roots.end(), less);

    double scale = 1.0 + std::abs(z) + a;
    double gap = std::min({std::abs(out.roots[0] - out.roots[1]),
                           std::abs(out.roots[0] - out.roots[2]),
                           std::abs(out.roots[1] - out.roots[2])});
    out.near_double = gap < 1e-7 * scale;
    return out;
}

// Discriminant of the monic cubic in xi; negative iff there is a non-real
// pair of roots, i.e. iff x is inside the support of the density.
inline double cubic_discriminant(double x, double a) {
    double b = -x, c = 1.0 - a * a, d = x * a * a;
    return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c -
           4.0 * c * c * c - 27.0 * d * d;
}

}  // namespace extsrc

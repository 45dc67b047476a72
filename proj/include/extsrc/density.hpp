#pragma once

// Limiting mean eigenvalue density rho(x) = |Im xi(x)| / pi, support
// detection across the phase transition, edge constants and exponents.

#include <cmath>
#include <numbers>
#include <vector>

#include "extsrc/cubic.hpp"
#include "extsrc/errors.hpp"
#include "extsrc/gauss.hpp"
#include "extsrc/richardson.hpp"

namespace extsrc {

enum class Phase { OneInterval, Critical, TwoInterval };

struct DensityProfile {
    double a;
    std::vector<double> grid;
    std::vector<double> values;
    double z1;
    double rho1;
    Phase phase;
};

struct Interval {
    double lo, hi;
};

inline double density(double x, double a) {
    // Non-real roots exist iff the discriminant is negative; deciding this
    // first avoids spurious imaginary parts of near-double real roots.
    if (cubic_discriminant(x, a) >= 0.0) return 0.0;
    CubicRoots cr = solve_cubic(cplx(x, 0.0), a);
    double im = 0.0;
    for (const cplx& r : cr.roots) im = std::max(im, std::abs(r.imag()));
    return im / std::numbers::pi;
}

// Support intervals, located by bisection on the discriminant sign.
inline std::vector<Interval> support(double a) {
    double xmax = a + 2.5;
    const int scan = 4000;
    auto bisect = [&](double lo, double hi) {
        // sign change of the discriminant in (lo, hi)
        double flo = cubic_discriminant(lo, a);
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = cubic_discriminant(mid, a);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if (hi - lo < 1e-13) break;
        }
        return 0.5 * (lo + hi);
    };
    std::vector<double> edges;
    double prev = cubic_discriminant(0.0, a);
    double xprev = 0.0;
    for (int i = 1; i <= scan; ++i) {
        double x = xmax * i / scan;
        double f = cubic_discriminant(x, a);
        if ((f < 0.0) != (prev < 0.0)) edges.push_back(bisect(xprev, x));
        prev = f;
        xprev = x;
    }
    std::vector<Interval> out;
    if (edges.empty()) return out;
    if (edges.size() == 1) {
        out.push_back({-edges[0], edges[0]});
    } else {
        // two edges on the positive axis: [z2', z1] and its mirror
        out.push_back({-edges[1], -edges[0]});
        out.push_back({edges[0], edges[1]});
    }
    return out;
}

inline Phase phase_of(double a) {
    if (a < 1.0) return Phase::OneInterval;
    if (a == 1.0) return Phase::Critical;
    return Phase::TwoInterval;
}

// rho_1 = lim_{x -> z1-} pi rho(x) / sqrt(z1 - x), by Richardson
// extrapolation over a geometric delta ladder.
inline double edge_constant(double a) {
    if (!(a > 0.0 && a < 1.0))
        throw UnsupportedPhase("edge_constant: requires 0 < a < 1");
    std::vector<Interval> sup = support(a);
    double z1 = sup.back().hi;
    std::vector<double> eps, vals;
    for (double d = 1e-3 * z1; d > 0.8e-5 * z1; d *= 0.5) {
        eps.push_back(d);
        vals.push_back(std::numbers::pi * density(z1 - d, a) / std::sqrt(d));
    }
    // pi rho / sqrt(delta) = rho1 (1 + c1 delta + c2 delta^2 + ...)
    std::vector<double> est;
    for (size_t i = 0; i + 2 < eps.size(); ++i) {
        std::vector<double> e = {eps[i], eps[i + 1], eps[i + 2]};
        std::vector<double> v = {vals[i], vals[i + 1], vals[i + 2]};
        est.push_back(extrapolate(v, e, {1.0, 2.0}));
    }
    for (size_t i = 0; i + 1 < est.size(); ++i)
        if (std::fabs(est[i + 1] - est[i]) > 1e-4 * std::fabs(est[i + 1]))
            throw ExtrapolationUnstable("edge_constant: ladder not stabilizing");
    return est.back();
}

// Least-squares slope of log rho versus log distance toward `target`,
// over a decade of scales inside [1e-6, 1e-3] * scale.
inline double critical_exponent(double a, double target) {
    std::vector<Interval> sup = support(a);
    if (sup.empty()) throw InsufficientDecade("critical_exponent: empty support");
    double z1 = sup.back().hi;
    double scale = z1;
    double lo = 1e-6 * scale, hi = 1e-3 * scale;
    const int m = 25;
    // direction: approach the target from inside the support
    double dir = (target > 0.5 * z1) ? -1.0 : 1.0;
    if (std::fabs(target) < 1e-12) dir = 1.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = 0; i < m; ++i) {
        double d = lo * std::pow(hi / lo, double(i) / (m - 1));
        double rho = density(target + dir * d, a);
        if (rho <= 0.0)
            throw InsufficientDecade("critical_exponent: density vanished inside fit window");
        double lx = std::log(d), ly = std::log(rho);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

// Total mass over the support.  Tanh-sinh quadrature absorbs the
// square-root edges; intervals through the origin are split there so the
// cube-root point of the critical phase sits at a panel endpoint.
inline double density_mass(double a) {
    std::vector<Interval> sup = support(a);
    std::vector<Interval> pieces;
    for (const Interval& iv : sup) {
        if (iv.lo < 0.0 && iv.hi > 0.0) {
            pieces.push_back({iv.lo, 0.0});
            pieces.push_back({0.0, iv.hi});
        } else {
            pieces.push_back(iv);
        }
    }
    double mass = 0.0;
    for (const Interval& iv : pieces)
        mass += quad::tanh_sinh([&](double x) { return density(x, a); },
                                iv.lo, iv.hi, 1e-10);
    return mass;
}

inline DensityProfile density_profile(double a, double xmin, double xmax, int points) {
    DensityProfile dp;
    dp.a = a;
    dp.phase = phase_of(a);
    std::vector<Interval> sup = support(a);
    dp.z1 = sup.empty() ? 0.0 : sup.back().hi;
    dp.rho1 = (a > 0.0 && a < 1.0) ? edge_constant(a) : 0.0;
    dp.grid.resize(points);
    dp.values.resize(points);
    for (int i = 0; i < points; ++i) {
        double x = (points == 1) ? xmin : xmin + (xmax - xmin) * i / (points - 1);
        dp.grid[i] = x;
        dp.values[i] = density(x, a);
    }
    return dp;
}

}  // namespace extsrc

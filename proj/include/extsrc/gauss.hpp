#pragma once

// Quadrature rules shared across modules: a fixed Gauss-Legendre rule for
// composite panels and a tanh-sinh rule for endpoint-singular integrands.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "extsrc/errors.hpp"

namespace extsrc::quad {

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on the Legendre
// polynomial.
inline void gl_compute(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::fabs(dt) < 1e-15) break;
        }
        x[i] = t;
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace detail

struct GlRule {
    std::vector<double> x, w;
};

inline const GlRule& gl_rule() {
    static GlRule r = [] {
        GlRule rr;
        detail::gl_compute(16, rr.x, rr.w);
        return rr;
    }();
    return r;
}

// Tanh-sinh quadrature of f over (lo, hi); tolerates integrable algebraic
// singularities at the endpoints.  Converges by level doubling.
inline double tanh_sinh(const std::function<double(double)>& f, double lo,
                        double hi, double tol = 1e-10) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const double tmax = 3.8;
    auto point = [&](double t, double& x, double& w) {
        double u = 0.5 * std::numbers::pi * std::sinh(t);
        double ch = std::cosh(u);
        x = mid + half * std::tanh(u);
        w = half * 0.5 * std::numbers::pi * std::cosh(t) / (ch * ch);
    };
    double prev = 0.0;
    for (int level = 2; level <= 12; ++level) {
        double h = tmax / (1 << level);
        double sum = 0.0;
        for (int i = -(1 << level); i <= (1 << level); ++i) {
            double x, w;
            point(i * h, x, w);
            if (w < 1e-300 || !(x > lo && x < hi)) continue;
            sum += w * f(x);
        }
        sum *= h;
        if (level > 3 && std::fabs(sum - prev) < tol * (1.0 + std::fabs(sum)))
            return sum;
        prev = sum;
    }
    throw NonConvergence("tanh_sinh: level budget exceeded");
}

}  // namespace extsrc::quad

// Universality checks: the rescaled kernel and its bulk (sine-kernel) and
// edge (Airy-kernel) scaling limits, compared through gauge-invariant
// combinations only.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "extsrc/airy.hpp"
#include "extsrc/density.hpp"
#include "extsrc/ensemble.hpp"
#include "extsrc/errors.hpp"
#include "extsrc/lambda.hpp"
#include "extsrc/surface.hpp"

namespace extsrc {

struct ScalingReport {
    std::string regime;  // "bulk" or "edge"
    double a = 0.0;
    double x0 = 0.0;  // bulk reference point, or the edge z1
    std::vector<int> ladder;
    std::vector<double> product_errors;  // sup over the grid, one per n
    std::vector<double> diag_errors;
    double rate_estimate = 0.0;  // log-log slope of the combined sup error

    double combined(size_t i) const {
        return std::max(product_errors[i], diag_errors[i]);
    }

    // errors nonincreasing along the ladder within the given slack factor
    bool nonincreasing(double slack = 1.25) const {
        for (size_t i = 1; i < ladder.size(); ++i)
            if (combined(i) > slack * combined(i - 1)) return false;
        return true;
    }
};

// K^(x,y) = e^{n(h(x)-h(y))} K(x,y) with h(x) = Re lambda_{1+}(x) - x^2/4.
// The conjugation cancels on the diagonal and in products around cycles, so
// correlation functions are unchanged.
class RescaledKernel {
  public:
    explicit RescaledKernel(const SourceParams& params)
        : kernel_(params, {}), lambdas_(params.a), n_(params.n) {}

    double operator()(double x, double y) const {
        double gauge = std::exp(n_ * (lambdas_.h_function(x) - lambdas_.h_function(y)));
        return gauge * kernel_(x, y);
    }

    double gauge_exponent(double x) const { return n_ * lambdas_.h_function(x); }
    const KernelMatrix& kernel() const { return kernel_; }
    const LambdaEvaluator& lambdas() const { return lambdas_; }

  private:
    KernelMatrix kernel_;
    LambdaEvaluator lambdas_;
    int n_;
};

inline double rescaled_kernel(const SourceParams& params, double x, double y) {
    return RescaledKernel(params)(x, y);
}

namespace detail_scaling {

inline double sinc_pi(double t) {
    if (t == 0.0) return 1.0;
    return std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
}

inline double airy_kernel(double u, double v) {
    AiryPair au = airy(cplx(u, 0.0)), av = airy(cplx(v, 0.0));
    if (u == v)  // confluent diagonal
        return (au.ai_prime * au.ai_prime - u * au.ai * au.ai).real();
    return ((au.ai * av.ai_prime - au.ai_prime * av.ai) / cplx(u - v, 0.0)).real();
}

// least-squares slope of log err against log n
inline double loglog_slope(const std::vector<int>& ns, const std::vector<double>& es) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < ns.size(); ++i) {
        if (!(es[i] > 0.0)) continue;
        double x = std::log(static_cast<double>(ns[i])), y = std::log(es[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace detail_scaling

// Bulk check at x0: L_n(u,v) = K(x0 + u/(n rho), x0 + v/(n rho)) / (n rho)
// on a 33x33 grid over [-2,2]^2, compared with the sine kernel through the
// gauge-invariant product L(u,v) L(v,u) and the diagonal.  The conjugation
// by e^{n h} cancels identically in both quantities, so the bare kernel is
// used directly.
inline ScalingReport bulk_check(double a, double x0, const std::vector<int>& ladder,
                                int grid_points = 33) {
    double rho = density(x0, a);
    if (!(rho > 0.0)) throw UnsupportedPhase("bulk_check: rho(x0) must be positive");
    ScalingReport rep;
    rep.regime = "bulk";
    rep.a = a;
    rep.x0 = x0;
    rep.ladder = ladder;
    std::vector<double> u(grid_points);
    for (int i = 0; i < grid_points; ++i)
        u[i] = -2.0 + 4.0 * i / (grid_points - 1);
    for (int n : ladder) {
        KernelMatrix K(a, n, {});
        double s = n * rho;
        std::vector<std::vector<double>> k(grid_points, std::vector<double>(grid_points));
        for (int i = 0; i < grid_points; ++i)
            for (int j = 0; j < grid_points; ++j)
                k[i][j] = K(x0 + u[i] / s, x0 + u[j] / s) / s;
        double perr = 0.0, derr = 0.0;
        for (int i = 0; i < grid_points; ++i) {
            derr = std::max(derr, std::fabs(k[i][i] - 1.0));
            for (int j = 0; j < grid_points; ++j) {
                if (i == j) continue;
                double sc = detail_scaling::sinc_pi(u[i] - u[j]);
                perr = std::max(perr, std::fabs(k[i][j] * k[j][i] - sc * sc));
            }
        }
        rep.product_errors.push_back(perr);
        rep.diag_errors.push_back(derr);
    }
    std::vector<double> comb;
    for (size_t i = 0; i < ladder.size(); ++i) comb.push_back(rep.combined(i));
    rep.rate_estimate = detail_scaling::loglog_slope(ladder, comb);
    return rep;
}

// Edge check at the right endpoint z1: A_n(u,v) = K(z1 + u/f, z1 + v/f)/f
// with f = (rho1 n)^{2/3}, on a 33x33 grid over [-4,2]^2, against the Airy
// kernel through gauge-invariant products and the diagonal.
inline ScalingReport edge_check(double a, const std::vector<int>& ladder,
                                int grid_points = 33) {
    std::vector<Interval> sup = support(a);
    double z1 = sup.back().hi;
    double rho1 = edge_constant(a);
    ScalingReport rep;
    rep.regime = "edge";
    rep.a = a;
    rep.x0 = z1;
    rep.ladder = ladder;
    std::vector<double> u(grid_points);
    for (int i = 0; i < grid_points; ++i)
        u[i] = -4.0 + 6.0 * i / (grid_points - 1);
    for (int n : ladder) {
        KernelMatrix K(a, n, {});
        double f = std::pow(rho1 * n, 2.0 / 3.0);
        std::vector<std::vector<double>> k(grid_points, std::vector<double>(grid_points));
        for (int i = 0; i < grid_points; ++i)
            for (int j = 0; j < grid_points; ++j)
                k[i][j] = K(z1 + u[i] / f, z1 + u[j] / f) / f;
        double perr = 0.0, derr = 0.0;
        for (int i = 0; i < grid_points; ++i) {
            derr = std::max(derr,
                            std::fabs(k[i][i] - detail_scaling::airy_kernel(u[i], u[i])));
            for (int j = 0; j < grid_points; ++j) {
                if (i == j) continue;
                double ak = detail_scaling::airy_kernel(u[i], u[j]);
                perr = std::max(perr, std::fabs(k[i][j] * k[j][i] - ak * ak));
            }
        }
        rep.product_errors.push_back(perr);
        rep.diag_errors.push_back(derr);
    }
    std::vector<double> comb;
    for (size_t i = 0; i < ladder.size(); ++i) comb.push_back(rep.combined(i));
    rep.rate_estimate = detail_scaling::loglog_slope(ladder, comb);
    return rep;
}

}  // namespace extsrc

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "extsrc/parametrix.hpp"
#include "extsrc/richardson.hpp"

using namespace extsrc;

namespace {
Mat3 extrapolate_mat(const std::array<Mat3, 3>& ms, const std::vector<double>& eps) {
    Mat3 out;
    for (int k = 0; k < 9; ++k) {
        std::vector<cplx> seq = {ms[0].m[k], ms[1].m[k], ms[2].m[k]};
        out.m[k] = extrapolate(seq, eps, {1.0, 2.0});
    }
    return out;
}
}  // namespace

TEST_CASE("conformal coordinate: zero, branch, and conformality") {
    LocalParametrix lp(0.4);
    double z2 = lp.branch().z2;
    double r0 = lp.disk_radius();

    // phase pi/3 on the axis above the branch point
    for (double t : {0.3, 0.6, 0.9}) {
        cplx f = lp.conformal_f(cplx(0.0, z2 + t * r0));
        CHECK(std::fabs(std::arg(f) - std::numbers::pi / 3.0) < 1e-9);
    }
    // the vertical segment below maps into the ray arg s = -2pi/3
    for (double t : {0.3, 0.7}) {
        cplx f = lp.conformal_f(cplx(1e-9, z2 - t * r0));
        CHECK(std::fabs(std::arg(f) + 2.0 * std::numbers::pi / 3.0) < 1e-6);
    }
    // vanishing at the branch point (extrapolate from nearby, the branch
    // point itself is guarded)
    cplx fn = lp.conformal_f(cplx(0.0, z2 + 1e-4));
    CHECK(std::abs(fn) < 1e-3);
    // conformality: |f'| bounded away from zero across the disk
    for (double th : {0.4, 1.9, 3.5, 5.1}) {
        cplx z = cplx(0.0, z2) + std::polar(0.5 * r0, th);
        cplx fd = (lp.conformal_f(z + 1e-6) - lp.conformal_f(z - 1e-6)) / 2e-6;
        CHECK(std::abs(fd) > 0.1);
    }
    CHECK_THROWS_AS(lp.conformal_f(cplx(0.0, z2 + 2.0 * r0)), OutsideDisk);
}

TEST_CASE("prefactor is analytic at the branch point") {
    LocalParametrix lp(0.4);
    CHECK(lp.laurent_defect(40) < 1e-8);
    CHECK(lp.laurent_defect(80) < 1e-8);
}

TEST_CASE("jump across the vertical part inside the disk") {
    LocalParametrix lp(0.4);
    const LambdaEvaluator& lam = lp.lambdas();
    double z2 = lp.branch().z2;
    double r0 = lp.disk_radius();
    int n = 40;
    std::vector<double> eps = {1e-6, 5e-7, 2.5e-7};
    const cplx left(-1.0, 0.0), right(1.0, 0.0);

    for (double t : {0.35, 0.7}) {
        cplx y(0.0, z2 - t * r0);
        std::array<Mat3, 3> Pp, Pm;
        for (size_t i = 0; i < eps.size(); ++i) {
            Pp[i] = lp.local_P(y + eps[i] * left, n);
            Pm[i] = lp.local_P(y + eps[i] * right, n);
        }
        Mat3 Pplus = extrapolate_mat(Pp, eps);
        Mat3 Pminus = extrapolate_mat(Pm, eps);
        cplx l3p = lam.lambda_boundary(y, 3, left);
        cplx l3m = lam.lambda_boundary(y, 3, right);
        Mat3 J;
        J(0, 0) = 1.0;
        J(1, 2) = 1.0;
        J(2, 1) = -1.0;
        J(2, 2) = std::exp(static_cast<double>(n) * (l3p - l3m));
        double scale = std::max(1.0, std::max(Pplus.norm(), Pminus.norm()));
        CHECK((Pplus - Pminus * J).norm() / scale < 1e-8);
    }
}

TEST_CASE("jump across the non-vertical local contours") {
    // pick points just off the rays arg s = 0 and 2pi/3 in the local
    // coordinate; both one-sided limits are taken in z and compared through
    // the corresponding jump matrix with the exact exponent difference
    LocalParametrix lp(0.4);
    const LambdaEvaluator& lam = lp.lambdas();
    double z2 = lp.branch().z2;
    double r0 = lp.disk_radius();
    int n = 40;

    // locate z with f(z) on the ray arg s = 0 by bisection in the angle
    auto find_on_ray = [&](double ray, double radius) {
        double lo = -0.5 * std::numbers::pi + 0.05, hi = 0.5 * std::numbers::pi;
        auto phase = [&](double th) {
            cplx z = cplx(0.0, z2) + std::polar(radius, th);
            return std::remainder(std::arg(lp.conformal_f(z)) - ray,
                                  2.0 * std::numbers::pi);
        };
        // scan for a sign change
        double prev = phase(lo), a0 = lo;
        for (double th = lo + 0.1; th <= hi + 2.0 * std::numbers::pi; th += 0.1) {
            double cur = phase(th);
            if (prev * cur <= 0.0 && std::fabs(cur - prev) < 1.0) {
                lo = a0;
                hi = th;
                break;
            }
            prev = cur;
            a0 = th;
        }
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (phase(lo) * phase(mid) <= 0.0)
                hi = mid;
            else
                lo = mid;
        }
        return cplx(0.0, z2) + std::polar(radius, 0.5 * (lo + hi));
    };

    for (double ray : {0.0, 2.0 * std::numbers::pi / 3.0}) {
        cplx zs = find_on_ray(ray, 0.45 * r0);
        // normal direction in z: rotate the f-tangent by +-pi/2
        cplx fd = (lp.conformal_f(zs + 1e-6) - lp.conformal_f(zs - 1e-6)) / 2e-6;
        cplx tang = std::polar(1.0, ray) / fd;  // dz moving s along the ray
        cplx nrm = cplx(0.0, 1.0) * tang / std::abs(tang);
        // the "+" side carries the sector between the two non-vertical rays;
        // for the upper-left ray that sector lies clockwise of the ray
        if (ray > 1.0) nrm = -nrm;
        std::vector<double> eps = {1e-6, 5e-7, 2.5e-7};
        std::array<Mat3, 3> Pp, Pm;
        for (size_t i = 0; i < eps.size(); ++i) {
            Pp[i] = lp.local_P(zs + eps[i] * nrm, n);
            Pm[i] = lp.local_P(zs - eps[i] * nrm, n);
        }
        Mat3 Pplus = extrapolate_mat(Pp, eps);
        Mat3 Pminus = extrapolate_mat(Pm, eps);
        cplx d = lam.lambda(zs, 2) - lam.lambda(zs, 3);
        Mat3 J = Mat3::identity();
        if (ray == 0.0)
            J(1, 2) = std::exp(-static_cast<double>(n) * d);  // right contour
        else
            J(2, 1) = std::exp(static_cast<double>(n) * d);  // left contour
        double scale = std::max(1.0, std::max(Pplus.norm(), Pminus.norm()));
        CHECK((Pplus - Pminus * J).norm() / scale < 1e-8);
        // the off-diagonal exponential should be exponentially small there
        CHECK(std::abs(ray == 0.0 ? J(1, 2) : J(2, 1)) < 1.0);
    }
}

TEST_CASE("boundary matching improves like 1/n") {
    LocalParametrix lp(0.4);
    double m40 = lp.matching_mismatch(40);
    double m80 = lp.matching_mismatch(80);
    double m160 = lp.matching_mismatch(160);
    CHECK(m40 / m80 > 1.5);
    CHECK(m40 / m80 < 2.5);
    CHECK(m80 / m160 > 1.5);
    CHECK(m80 / m160 < 2.5);
}

TEST_CASE("mirror parametrix matches the model near the lower branch point") {
    LocalParametrix lp(0.4);
    const ModelEvaluator& mod = lp.model();
    double z2 = lp.branch().z2;
    double r0 = lp.disk_radius();
    int n = 80;
    double worst = 0.0;
    for (double th : {0.3, 1.2, 2.6, 4.0, 5.3}) {
        cplx z = cplx(0.0, -z2) + std::polar(0.999 * r0, th);
        if (std::fabs(std::remainder(th - 0.5 * std::numbers::pi,
                                     2.0 * std::numbers::pi)) < 0.15)
            continue;
        Mat3 P = lp.local_P_mirror(z, n);
        Mat3 N = mod.model_N(z);
        worst = std::max(worst, (P * N.inverse() - Mat3::identity()).norm());
    }
    CHECK(worst < 0.12);
}

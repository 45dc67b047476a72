#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "extsrc/levelcurves.hpp"

using namespace extsrc;

namespace {
double min_dist(const std::vector<Polyline>& curves, cplx target) {
    double best = 1e300;
    for (const Polyline& c : curves)
        for (cplx p : c) best = std::min(best, std::abs(p - target));
    return best;
}
}  // namespace

TEST_CASE("pair 12 contains the real segment and three branches at z1") {
    BranchData bd = branch_points(0.4);
    Rect win{-3.0, 3.0, -2.0, 2.0};
    auto curves = level_curves(0.4, 12, win, 61, 41);

    // the segment [0, z1] is part of the zero set
    for (double x : {0.2, 0.8, 1.6}) {
        CHECK(min_dist(curves, cplx(x, 0.0)) < 0.02);  // point-sample spacing
    }

    // three branches emanate from z1: cluster the angles of curve points in
    // a thin annulus around the branch point
    std::vector<double> angles;
    for (const Polyline& c : curves)
        for (cplx p : c) {
            double r = std::abs(p - cplx(bd.z1, 0.0));
            if (r > 0.1 && r < 0.35) angles.push_back(std::arg(p - cplx(bd.z1, 0.0)));
        }
    std::sort(angles.begin(), angles.end());
    int clusters = angles.empty() ? 0 : 1;
    for (size_t i = 1; i < angles.size(); ++i)
        if (angles[i] - angles[i - 1] > 0.6) ++clusters;
    if (!angles.empty() &&
        angles.front() + 2.0 * std::numbers::pi - angles.back() < 0.6 &&
        clusters > 1)
        --clusters;
    CHECK(clusters == 3);
}

TEST_CASE("pair 23 contains the vertical half-lines and closes through x0") {
    BranchData bd = branch_points(0.4);
    Rect win{-3.0, 3.0, -2.0, 2.0};
    auto curves = level_curves(0.4, 23, win, 61, 41);
    for (double y : {bd.z2 + 0.2, 1.5}) {
        CHECK(min_dist(curves, cplx(0.0, y)) < 0.02);
        CHECK(min_dist(curves, cplx(0.0, -y)) < 0.02);
    }
    double xx = x0(0.4);
    CHECK(min_dist(curves, cplx(xx, 0.0)) < 0.15);
    CHECK(min_dist(curves, cplx(-xx, 0.0)) < 0.15);
}

TEST_CASE("traced points satisfy the level condition") {
    // direct lambda evaluation at traced (non-appended) points stays small
    LambdaEvaluator lev(0.4);
    Rect win{-3.0, 3.0, -2.0, 2.0};
    auto curves = level_curves(0.4, 23, win, 61, 41);
    int checked = 0;
    for (const Polyline& c : curves) {
        for (size_t i = 0; i < c.size(); i += 7) {
            cplx p = c[i];
            if (std::fabs(p.real()) < 0.2 || std::fabs(p.imag()) < 0.2) continue;
            double r = (lev.lambda(p, 2) - lev.lambda(p, 3)).real();
            CHECK(std::fabs(r) < 0.03);
            if (++checked >= 10) break;
        }
        if (checked >= 10) break;
    }
    CHECK(checked >= 5);
}

TEST_CASE("x0 value and basic properties") {
    BranchData bd = branch_points(0.4);
    double v = x0(0.4);
    CHECK(v > 0.0);
    CHECK(v < bd.z1);
    // frozen fixture
    CHECK(v == doctest::Approx(1.15013240).epsilon(1e-6));
}

TEST_CASE("x0 is continuous and decreasing in a") {
    double prev = -1.0;
    for (double a = 0.2; a < 0.81; a += 0.05) {
        double v = x0(a);
        BranchData bd = branch_points(a);
        CHECK(v > 0.0);
        CHECK(v < bd.z1);
        if (prev > 0.0) {
            CHECK(std::fabs(v - prev) < 0.3);
            CHECK(v < prev);
        }
        prev = v;
    }
}

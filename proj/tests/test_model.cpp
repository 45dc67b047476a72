#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "extsrc/model.hpp"

using namespace extsrc;

TEST_CASE("N tends to the identity at infinity with a 1/z rate") {
    ModelEvaluator ev(0.4);
    double prev = 1e300;
    for (double R : {1e2, 1e3, 1e4}) {
        Mat3 N = ev.model_N(cplx(0.6 * R, 0.8 * R));
        double dev = (N - Mat3::identity()).norm();
        CHECK(dev * R < 10.0);       // bounded
        CHECK(dev * R < prev * 2.0);  // non-increasing up to slack
        prev = dev * R;
    }
    Mat3 N = ev.model_N(cplx(1000.0, 0.0));
    CHECK((N - Mat3::identity()).norm() < 1e-2);
}

TEST_CASE("det N = 1 at random points off the cuts") {
    ModelEvaluator ev(0.4);
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> ur(-4.0, 4.0);
    int done = 0;
    while (done < 50) {
        cplx z(ur(rng), ur(rng));
        if (std::fabs(z.imag()) < 0.1 && std::fabs(z.real()) <= 2.3) continue;
        if (std::fabs(z.real()) < 0.1 && std::fabs(z.imag()) <= 1.0) continue;
        cplx d = ev.model_N(z).det();
        CHECK(std::abs(d - 1.0) < 1e-10);
        ++done;
    }
}

TEST_CASE("all three jump relations hold on the cuts") {
    ModelJumpReport rep = verify_model_jumps(0.4, 6);
    CHECK(rep.entries.size() == 18);
    for (const ModelJumpResidual& r : rep.entries) {
        INFO(r.contour, " at ", r.point.real(), "+", r.point.imag(), "i");
        CHECK(r.residual < 1e-8);
    }
    CHECK(rep.max_residual < 1e-8);
}

TEST_CASE("rows are consistent with the sheet values") {
    // row ratios: N(1,j)/N(2,j) = (xi_j + a)/(xi_j - a)
    ModelEvaluator ev(0.4);
    for (cplx z : {cplx(1.2, 1.1), cplx(-2.0, -0.7), cplx(0.8, -1.9)}) {
        ModelSolution ms = ev.model(z);
        for (int j = 0; j < 3; ++j) {
            cplx xi = ms.xi[j + 1];
            cplx want = (xi + 0.4) / (xi - 0.4);
            CHECK(std::abs(ms.N(1, j) / ms.N(2, j) - want) < 1e-10 * std::abs(want));
        }
    }
}

TEST_CASE("guards") {
    ModelEvaluator ev(0.4);
    const BranchData& bd = ev.branch();
    CHECK_THROWS_AS(ev.model_N(cplx(bd.z1, 0.0)), BranchPointProximity);
    CHECK_THROWS_AS(ev.model_N(cplx(0.0, bd.z2 + 1e-9)), BranchPointProximity);
    CHECK_THROWS_AS(ev.model_N(cplx(0.5, 0.0)), PathBlocked);
    CHECK_THROWS_AS(ev.model_N(cplx(0.0, 0.5 * bd.z2)), PathBlocked);
    CHECK_NOTHROW(ev.model_N(cplx(3.0, 0.0)));
}

TEST_CASE("conjugation symmetry up to a sign gauge") {
    // N(conj z) = D conj(N(z)) D with D = diag(-1, 1, 1)
    ModelEvaluator ev(0.4);
    for (cplx z : {cplx(1.4, 0.9), cplx(-0.8, 1.7)}) {
        Mat3 A = ev.model_N(z);
        Mat3 B = ev.model_N(std::conj(z));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double sgn = ((r == 0) != (c == 0)) ? -1.0 : 1.0;
                CHECK(std::abs(B(r, c) - sgn * std::conj(A(r, c))) < 1e-10);
            }
    }
}

// Airy-based local solution near the imaginary branch point i z2 and its
// mirror at -i z2: conformal coordinate f, the analytic prefactor E, and the
// boundary matching rate against the outer model solution.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "extsrc/airy.hpp"
#include "extsrc/errors.hpp"
#include "extsrc/lambda.hpp"
#include "extsrc/mat3.hpp"
#include "extsrc/model.hpp"

namespace extsrc {

class LocalParametrix {
  public:
    explicit LocalParametrix(double a)
        : a_(a), lam_(a), mod_(a), bd_(lam_.branch()) {
        r0_ = 0.25 * std::min(bd_.z2, bd_.z1);
        top_ = cplx(0.0, bd_.z2);
        // Fix the cube-root branch of v(z) = g(z)^2 / (z - iz2)^3 (g = 3/4 of
        // the sheet-2/3 exponent difference, v analytic and nonvanishing on
        // the disk) at a reference point on the axis above the branch point,
        // where the phase of f must be pi/3.
        cplx zr = top_ + cplx(0.0, 0.5 * r0_);
        v_ref_ = v_func(zr);
        cplx u0 = std::pow(v_ref_, 1.0 / 3.0);
        double best = 1e300;
        for (int k = 0; k < 3; ++k) {
            cplx u = u0 * std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0);
            double phase = std::arg((zr - top_) * u);
            double off = std::fabs(
                std::remainder(phase - std::numbers::pi / 3.0,
                               2.0 * std::numbers::pi));
            if (off < best) {
                best = off;
                u_ref_ = u;
            }
        }
        if (best > 0.2)
            throw NonConvergence("local parametrix: cannot fix the f branch");
    }

    double disk_radius() const { return r0_; }
    const BranchData& branch() const { return bd_; }
    const LambdaEvaluator& lambdas() const { return lam_; }
    const ModelEvaluator& model() const { return mod_; }

    // Conformal coordinate s = f(z) on the disk around i z2.
    cplx conformal_f(cplx z) const {
        if (std::abs(z - top_) > r0_ * (1.0 + 1e-12))
            throw OutsideDisk("conformal_f: z outside the local disk");
        cplx v = v_func(z);
        cplx u = u_ref_ * std::pow(v / v_ref_, 1.0 / 3.0);
        return (z - top_) * u;
    }

    // P(z) near i z2.
    Mat3 local_P(cplx z, int n) const {
        cplx f = conformal_f(z);
        cplx d = lam_.lambda(z, 2) - lam_.lambda(z, 3);
        cplx s = std::pow(static_cast<double>(n), 2.0 / 3.0) * f;
        Mat3 Phi = phi_matrix(s, phi_sector_of(s));
        Mat3 D = Mat3::diag(1.0, std::exp(0.5 * n * d), std::exp(-0.5 * n * d));
        return prefactor_E(z, f, n) * Phi * D;
    }

    // Analytic prefactor E = N L^{-1}.
    Mat3 prefactor_E(cplx z, int n) const {
        return prefactor_E(z, conformal_f(z), n);
    }

    // Mirror parametrix near -i z2 via the conjugation symmetry
    // N(conj z) = D0 conj(N(z)) D0, D0 = diag(-1, 1, 1).
    Mat3 local_P_mirror(cplx z, int n) const {
        Mat3 P = local_P(std::conj(z), n);
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double sgn = ((r == 0) != (c == 0)) ? -1.0 : 1.0;
                out(r, c) = sgn * std::conj(P(r, c));
            }
        return out;
    }

    // sup over the disk boundary of ||P N^{-1} - I||, sampled at `samples`
    // angles (angles whose Airy argument falls on a sector ray are skipped).
    double matching_mismatch(int n, int samples = 16) const {
        double worst = 0.0;
        int used = 0;
        for (int k = 0; k < samples; ++k) {
            double th = 2.0 * std::numbers::pi * (k + 0.37) / samples;
            cplx z = top_ + std::polar(0.999 * r0_, th);
            // skip the neighborhood of the cut below the branch point
            if (std::fabs(std::remainder(th + 0.5 * std::numbers::pi,
                                         2.0 * std::numbers::pi)) < 0.15)
                continue;
            Mat3 P, N;
            try {
                P = local_P(z, n);
                N = mod_.model_N(z);
            } catch (const OnRayError&) {
                continue;
            }
            worst = std::max(worst, (P * N.inverse() - Mat3::identity()).norm());
            ++used;
        }
        if (used < samples / 2)
            throw NonConvergence("matching_mismatch: too few usable samples");
        return worst;
    }

    // Magnitude of the first negative-power Laurent coefficient of E around
    // i z2, normalized by the typical size of E on the sampling circle.
    double laurent_defect(int n, int samples = 64) const {
        Mat3 acc;
        double scale = 0.0;
        double r = 0.5 * r0_;
        for (int k = 0; k < samples; ++k) {
            double th = 2.0 * std::numbers::pi * (k + 0.5) / samples;
            cplx z = top_ + std::polar(r, th);
            Mat3 E = prefactor_E(z, n);
            scale = std::max(scale, E.norm());
            // (1/2pi i) \oint E dz  ==  (r/samples) sum E(z_k) e^{i th_k}
            acc = acc + E * (std::polar(r / samples, th));
        }
        return acc.norm() / std::max(1.0, scale);
    }

  private:
    cplx v_func(cplx z) const {
        cplx g = 0.75 * (lam_.lambda(z, 2) - lam_.lambda(z, 3));
        cplx w = z - top_;
        return (g * g) / (w * w * w);
    }

    // Quarter power of f with its cut along the image of [0, i z2] (the ray
    // arg s = -2pi/3), real positive for f real positive.
    cplx quarter_power(cplx f) const {
        double th = std::arg(f);
        if (th <= -2.0 * std::numbers::pi / 3.0) th += 2.0 * std::numbers::pi;
        return std::pow(std::abs(f), 0.25) * std::polar(1.0, 0.25 * th);
    }

    Mat3 prefactor_E(cplx z, cplx f, int n) const {
        cplx f4 = quarter_power(f);
        double n6 = std::pow(static_cast<double>(n), 1.0 / 6.0);
        Mat3 B;
        B(0, 0) = 1.0;
        B(1, 1) = 1.0;
        B(1, 2) = cplx(0.0, 1.0);
        B(2, 1) = -1.0;
        B(2, 2) = cplx(0.0, 1.0);
        // the Airy-block normalization 1/(2 sqrt(pi)) must not touch the
        // scalar first component, whose counterpart in the Airy-model matrix
        // is exactly 1
        double c = 0.5 / std::sqrt(std::numbers::pi);
        Mat3 L = Mat3::diag(1.0, c / (n6 * f4), c * n6 * f4) * B;
        return mod_.model_N(z) * L.inverse();
    }

    double a_;
    LambdaEvaluator lam_;
    ModelEvaluator mod_;
    BranchData bd_;
    double r0_;
    cplx top_;
    cplx v_ref_;
    cplx u_ref_;
};

inline cplx conformal_f(cplx z, double a) {
    return LocalParametrix(a).conformal_f(z);
}

inline Mat3 local_P(cplx z, double a, int n) {
    return LocalParametrix(a).local_P(z, n);
}

}  // namespace extsrc

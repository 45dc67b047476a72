// Non-intersecting Brownian bridges with two endpoint groups, realized as a
// Hermitian-matrix Brownian bridge from 0 to diag(b,...,b,-b,...,-b); the
// time-t eigenvalue marginal maps onto the external-source ensemble with
// a = b sqrt(t/(1-t)) after rescaling by sqrt(t(1-t)).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "extsrc/density.hpp"
#include "extsrc/ensemble.hpp"
#include "extsrc/errors.hpp"

namespace extsrc {

struct BridgeEnsemble {
    double b;
    int n;
    std::vector<double> times;               // strictly increasing, in (0,1)
    std::vector<std::vector<double>> paths;  // one sorted position row per time
    uint64_t seed;
};

inline double effective_a(double b, double t) { return b * std::sqrt(t / (1.0 - t)); }

inline double critical_time(double b) { return 1.0 / (1.0 + b * b); }

// One replica: W is a Hermitian Brownian motion with the same coordinate
// scaling as the ensemble (diagonal variance t/n, off-diagonal re/im
// variance t/(2n)); the bridge M(t) = W(t) - t W(1) + t B_target is exact
// Gaussian conditioning, so the only discretization is the choice of
// recording times.
inline BridgeEnsemble simulate(double b, int n, std::vector<double> times,
                               uint64_t seed) {
    if (!(b > 0.0)) throw std::invalid_argument("simulate: b must be positive");
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("simulate: n must be even and >= 2");
    for (size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0 && times[i] < 1.0))
            throw std::invalid_argument("simulate: times must lie in (0,1)");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("simulate: times must be increasing");
    }
    SplitMix64 rng(SplitMix64::mix(seed, 0));
    double sd = 1.0 / std::sqrt(static_cast<double>(n));
    double so = 1.0 / std::sqrt(2.0 * n);
    std::vector<double> knots = times;
    knots.push_back(1.0);
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
    std::vector<Eigen::MatrixXcd> snaps;
    snaps.reserve(times.size());
    double prev = 0.0;
    for (double t : knots) {
        double root_dt = std::sqrt(t - prev);
        for (int i = 0; i < n; ++i) {
            W(i, i) += root_dt * sd * rng.gaussian();
            for (int j = i + 1; j < n; ++j) {
                cplx dw(root_dt * so * rng.gaussian(), root_dt * so * rng.gaussian());
                W(i, j) += dw;
                W(j, i) += std::conj(dw);
            }
        }
        if (t < 1.0) snaps.push_back(W);
        prev = t;
    }
    BridgeEnsemble out;
    out.b = b;
    out.n = n;
    out.times = std::move(times);
    out.seed = seed;
    out.paths.resize(out.times.size());
    for (size_t k = 0; k < out.times.size(); ++k) {
        double t = out.times[k];
        Eigen::MatrixXcd M = snaps[k] - t * W;
        for (int i = 0; i < n; ++i) M(i, i) += t * (i < n / 2 ? b : -b);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
        if (es.info() != Eigen::Success)
            throw EigenFail("simulate: eigensolver did not converge");
        out.paths[k].assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
        for (int i = 1; i < n; ++i)
            if (!(out.paths[k][i] - out.paths[k][i - 1] > 1e-14))
                throw NonIntersectViolation("simulate: eigenvalue gap underflow");
    }
    return out;
}

// Two-sample Kolmogorov-Smirnov statistic; the 1% critical value is
// 1.628 sqrt((m1+m2)/(m1 m2)).
inline double ks_statistic(std::vector<double> s1, std::vector<double> s2) {
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < s1.size() && j < s2.size()) {
        if (s1[i] <= s2[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / s1.size() -
                                  static_cast<double>(j) / s2.size()));
    }
    return d;
}

inline double ks_critical_1pct(size_t m1, size_t m2) {
    return 1.628 * std::sqrt(static_cast<double>(m1 + m2) /
                             (static_cast<double>(m1) * static_cast<double>(m2)));
}

// Locate the splitting time by bisection on the support-interval count of
// the mapped ensemble a(t) = b sqrt(t/(1-t)); cross-validates the closed
// form t_c = 1/(1+b^2).
inline double critical_time_from_support(double b, double tol = 1e-6) {
    auto split = [&](double t) { return support(effective_a(b, t)).size() >= 2; };
    double lo = 1e-4, hi = 1.0 - 1e-4;
    if (split(lo) || !split(hi))
        throw CurveNotFound("critical_time_from_support: no sign change in (0,1)");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (split(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace extsrc

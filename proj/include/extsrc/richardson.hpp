#pragma once

// Ladder extrapolation: given samples f(eps_i) with error model
// f(eps) = f0 + sum_k c_k eps^{alpha_k}, recover f0.  The combination
// weights depend only on the ladder and the exponents, so the same weights
// apply to scalar, complex, or matrix-valued samples.

#include <array>
#include <cmath>
#include <vector>

namespace extsrc {

// Weights w_i with sum w_i = 1 and sum w_i eps_i^{alpha_k} = 0 for all k.
// Requires eps.size() == alphas.size() + 1.
inline std::vector<double> extrapolation_weights(const std::vector<double>& eps,
                                                 const std::vector<double>& alphas) {
    const int m = static_cast<int>(eps.size());
    std::vector<double> A(m * m), rhs(m, 0.0);
    for (int i = 0; i < m; ++i) A[0 * m + i] = 1.0;
    rhs[0] = 1.0;
    for (int k = 1; k < m; ++k)
        for (int i = 0; i < m; ++i)
            A[k * m + i] = std::pow(eps[i], alphas[k - 1]);
    // Gaussian elimination with partial pivoting on the tiny system.
    std::vector<int> piv(m);
    for (int i = 0; i < m; ++i) piv[i] = i;
    for (int col = 0; col < m; ++col) {
        int best = col;
        for (int r = col + 1; r < m; ++r)
            if (std::fabs(A[r * m + col]) > std::fabs(A[best * m + col])) best = r;
        if (best != col) {
            for (int c = 0; c < m; ++c) std::swap(A[col * m + c], A[best * m + c]);
            std::swap(rhs[col], rhs[best]);
        }
        for (int r = col + 1; r < m; ++r) {
            double f = A[r * m + col] / A[col * m + col];
            for (int c = col; c < m; ++c) A[r * m + c] -= f * A[col * m + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> w(m);
    for (int r = m - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < m; ++c) s -= A[r * m + c] * w[c];
        w[r] = s / A[r * m + r];
    }
    return w;
}

template <typename T>
T extrapolate(const std::vector<T>& values, const std::vector<double>& eps,
              const std::vector<double>& alphas) {
    std::vector<double> w = extrapolation_weights(eps, alphas);
    T out = values[0] * w[0];
    for (size_t i = 1; i < values.size(); ++i) out += values[i] * w[i];
    return out;
}

}  // namespace extsrc

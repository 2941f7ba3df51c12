#pragma once

// Finite differences on a uniform grid: 4th-order central in the interior,
// degrading to one-sided 2nd-order stencils at the ends.

#include <cstddef>
#include <vector>

namespace biham {

inline double grid_derivative(const std::vector<double>& f, int k, double ds,
                              bool* one_sided = nullptr) {
    const int n = static_cast<int>(f.size());
    if (one_sided) *one_sided = (k < 2 || k > n - 3);
    if (n >= 5) {
        // 4th order everywhere; biased stencils near the ends
        if (k >= 2 && k <= n - 3)
            return (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * ds);
        if (k == 0)
            return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) /
                   (12.0 * ds);
        if (k == 1)
            return (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) /
                   (12.0 * ds);
        if (k == n - 2)
            return -(-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] +
                     f[n - 5]) /
                   (12.0 * ds);
        return -(-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] -
                 3.0 * f[n - 5]) /
               (12.0 * ds);
    }
    if (one_sided) *one_sided = (k == 0 || k == n - 1);
    if (n == 2) return (f[1] - f[0]) / ds;
    if (k >= 1 && k <= n - 2) return (f[k + 1] - f[k - 1]) / (2.0 * ds);
    if (k == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * ds);
    return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * ds);
}

// Cumulative integral with 4th-order local rules (composite Simpson plus a
// Newton-Cotes half step on odd prefixes); I[0] = 0.
inline std::vector<double> grid_cumulative_integral(const std::vector<double>& f, double ds) {
    const int n = static_cast<int>(f.size());
    std::vector<double> I(n, 0.0);
    if (n == 2) {
        I[1] = 0.5 * ds * (f[0] + f[1]);
        return I;
    }
    for (int k = 1; k < n; ++k) {
        if (k == 1) {
            I[1] = ds / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        } else if (k % 2 == 0) {
            I[k] = I[k - 2] + ds / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
        } else {
            I[k] = I[k - 1] + ds / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
        }
    }
    return I;
}

}  // namespace biham

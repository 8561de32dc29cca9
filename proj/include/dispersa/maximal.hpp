#pragma once

#include <cmath>
#include <vector>

#include "dispersa/field.hpp"

namespace dispersa {

/// Discrete centered Hardy-Littlewood maximal function with periodic
/// windows: Mf(x_j) = max over radii r = m*dx, m = 0..n/2, of the mean of
/// |f| over the (2m+1)-point window centered at j. The degenerate window
/// m = 0 is included so that Mf >= |f| pointwise, matching the Lebesgue
/// point property of the continuum operator.
inline RealField maximal_function(const RealField& f) {
    const std::size_t n = f.grid.size();
    // prefix[i] = sum of |f| over the first i points of a tripled copy, so
    // any periodic window sum is one subtraction; windows centered near the
    // right edge reach index j + n + m < 3n.
    std::vector<double> prefix(3 * n + 1, 0.0);
    for (std::size_t i = 0; i < 3 * n; ++i)
        prefix[i + 1] = prefix[i] + std::abs(f.values[i % n]);

    RealField out(f.grid, f.time);
    const std::size_t max_radius = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        double best = std::abs(f.values[j]);
        for (std::size_t m = 1; m <= max_radius; ++m) {
            const std::size_t lo = j + n - m;  // index into the doubled copy
            const double sum = prefix[lo + 2 * m + 1] - prefix[lo];
            best = std::max(best, sum / static_cast<double>(2 * m + 1));
        }
        out.values[j] = best;
    }
    return out;
}

}  // namespace dispersa

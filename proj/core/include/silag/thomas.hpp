#ifndef SILAG_THOMAS_HPP
#define SILAG_THOMAS_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace silag {

/// Thomas algorithm for tridiagonal systems.
/// lower[0] and upper[N-1] are ignored. Requires strict diagonal dominance
/// |diag_i| > |lower_i| + |upper_i|, which the pressure-system assembly
/// guarantees by construction, so no pivoting is ever needed.
inline std::vector<double> thomas_solve(const std::vector<double>& lower,
                                        const std::vector<double>& diag,
                                        const std::vector<double>& upper,
                                        const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    assert(lower.size() == n && upper.size() == n && rhs.size() == n);
    assert(n >= 1);
#ifndef NDEBUG
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = (i == 0) ? 0.0 : std::abs(lower[i]);
        const double up = (i == n - 1) ? 0.0 : std::abs(upper[i]);
        assert(std::abs(diag[i]) > lo + up && "tridiagonal assembly lost diagonal dominance");
    }
#endif
    std::vector<double> c(n), d(n);
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = diag[i] - lower[i] * c[i - 1];
        c[i] = (i < n - 1) ? upper[i] / denom : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

} // namespace silag

#endif

#ifndef SILAG_NORMS_HPP
#define SILAG_NORMS_HPP

#include <cstddef>
#include <vector>

namespace silag {

struct ErrorNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

/// Mass-weighted discrete norms of an error field:
/// L1 = sum dm|e| / sum dm, L2 = sqrt(sum dm e^2 / sum dm), Linf = max|e|.
ErrorNorms error_norms(const std::vector<double>& dm, const std::vector<double>& error);

ErrorNorms error_norms(const std::vector<double>& dm, const std::vector<double>& field,
                       const std::vector<double>& reference);

/// Observed orders between successive grids: log(e_c/e_f) / log(N_f/N_c).
std::vector<double> observed_orders(const std::vector<std::size_t>& grids,
                                    const std::vector<double>& errors);

} // namespace silag

#endif

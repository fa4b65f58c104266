#include "silag/norms.hpp"

#include "silag/errors.hpp"

#include <algorithm>
#include <cmath>

namespace silag {

ErrorNorms error_norms(const std::vector<double>& dm, const std::vector<double>& error) {
    if (dm.size() != error.size())
        throw ConfigError("error_norms: size mismatch");
    double mass = 0.0, l1 = 0.0, l2 = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < dm.size(); ++i) {
        mass += dm[i];
        l1 += dm[i] * std::abs(error[i]);
        l2 += dm[i] * error[i] * error[i];
        linf = std::max(linf, std::abs(error[i]));
    }
    return {l1 / mass, std::sqrt(l2 / mass), linf};
}

ErrorNorms error_norms(const std::vector<double>& dm, const std::vector<double>& field,
                       const std::vector<double>& reference) {
    if (field.size() != reference.size())
        throw ConfigError("error_norms: size mismatch");
    std::vector<double> error(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        error[i] = field[i] - reference[i];
    return error_norms(dm, error);
}

std::vector<double> observed_orders(const std::vector<std::size_t>& grids,
                                    const std::vector<double>& errors) {
    if (grids.size() != errors.size())
        throw ConfigError("observed_orders: size mismatch");
    std::vector<double> orders;
    for (std::size_t i = 1; i < grids.size(); ++i)
        orders.push_back(std::log(errors[i - 1] / errors[i]) /
                         std::log(static_cast<double>(grids[i]) /
                                  static_cast<double>(grids[i - 1])));
    return orders;
}

} // namespace silag

#ifndef SILAG_EOS_HPP
#define SILAG_EOS_HPP

#include "silag/errors.hpp"

#include <cmath>
#include <string>

namespace silag {

/// Stiffened-gas material: e = V (p + gamma Pi) / (gamma - 1).
/// The colour flag tags which of the two fluids a cell belongs to;
/// it is exactly 0 or 1, never a mixture fraction.
struct MaterialParams {
    double gamma = 1.4;
    double pi = 0.0;
    int colour = 0;

    MaterialParams() = default;
    MaterialParams(double gamma_, double pi_, int colour_ = 0)
        : gamma(gamma_), pi(pi_), colour(colour_) {
        if (!(gamma > 1.0))
            throw ConfigError("MaterialParams: gamma must be > 1, got " + std::to_string(gamma));
        if (!(pi >= 0.0))
            throw ConfigError("MaterialParams: pi must be >= 0, got " + std::to_string(pi));
        if (colour != 0 && colour != 1)
            throw ConfigError("MaterialParams: colour must be 0 or 1");
    }
};

/// Specific internal energy from (V, p).
inline double internal_energy(double V, double p, const MaterialParams& mat) {
    if (!(V > 0.0))
        throw EosDomainError("internal_energy: specific volume V = " + std::to_string(V) + " <= 0");
    if (!(p + mat.pi > 0.0))
        throw EosDomainError("internal_energy: p + Pi = " + std::to_string(p + mat.pi) + " <= 0");
    return V * (p + mat.gamma * mat.pi) / (mat.gamma - 1.0);
}

/// Pressure from conserved quantities; u_cell is the cell-centered velocity.
/// A negative result is legal as long as p + Pi stays positive.
inline double pressure_from_conserved(double V, double E, double u_cell,
                                      const MaterialParams& mat) {
    if (!(V > 0.0))
        throw EosDomainError("pressure_from_conserved: specific volume V = " +
                             std::to_string(V) + " <= 0");
    const double e = E - 0.5 * u_cell * u_cell;
    return (mat.gamma - 1.0) * e / V - mat.gamma * mat.pi;
}

/// Squared Lagrangian acoustic wavespeed a^2 = gamma (p + Pi) / V.
inline double wavespeed_sq(double V, double p, const MaterialParams& mat) {
    if (!(V > 0.0))
        throw EosDomainError("wavespeed_sq: specific volume V = " + std::to_string(V) + " <= 0");
    if (!(p + mat.pi > 0.0))
        throw EosDomainError("wavespeed_sq: p + Pi = " + std::to_string(p + mat.pi) + " <= 0");
    return mat.gamma * (p + mat.pi) / V;
}

/// Lagrangian wavespeed (kg m^-2 s^-1).
inline double wavespeed(double V, double p, const MaterialParams& mat) {
    return std::sqrt(wavespeed_sq(V, p, mat));
}

/// Eulerian sound speed, a_E^2 = gamma (p + Pi) V.
inline double sound_speed(double V, double p, const MaterialParams& mat) {
    return std::sqrt(wavespeed_sq(V, p, mat)) * V;
}

} // namespace silag

#endif

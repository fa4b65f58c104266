#ifndef SILAG_EXACT_RIEMANN_HPP
#define SILAG_EXACT_RIEMANN_HPP

#include "silag/eos.hpp"

namespace silag {

/// One side of a Riemann problem; each side carries its own material.
struct RiemannSide {
    double rho;
    double u;
    double p;
    MaterialParams mat;
};

enum class WaveType { Shock, Rarefaction };

struct StarState {
    double p_star;
    double u_star;
    double rho_star_left;
    double rho_star_right;
    WaveType left_wave;
    WaveType right_wave;
};

struct Primitive {
    double rho;
    double u;
    double p;
};

/// Exact star state of the two-material stiffened-gas Riemann problem.
/// Throws VacuumError when the pressure function admits no positive root.
StarState solve_star(const RiemannSide& left, const RiemannSide& right);

/// Sample the self-similar solution at xi = x/t.
Primitive sample(const RiemannSide& left, const RiemannSide& right, const StarState& star,
                 double xi);

} // namespace silag

#endif

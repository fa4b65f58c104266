#ifndef SILAG_EXPLICIT_SCHEME_HPP
#define SILAG_EXPLICIT_SCHEME_HPP

#include "silag/eos.hpp"
#include "silag/implicit_step.hpp"
#include "silag/mesh.hpp"

#include <cstddef>
#include <vector>

namespace silag {

/// Cell-collocated state of the explicit Godunov reference scheme.
struct ExplicitState {
    std::vector<double> V;
    std::vector<double> u;
    std::vector<double> E;
    std::vector<MaterialParams> mats;

    std::size_t size() const { return V.size(); }
};

/// Collocate a staggered state by mass-weighted edge-velocity interpolation.
ExplicitState collocate_state(const State& state, const Mesh& mesh);

/// Spatial residual dQ/dt = -(F_{i+1/2} - F_{i-1/2}) / dm_i with MUSCL
/// reconstruction (generalized minmod, theta = 1.3, slopes per unit mass)
/// and exact Riemann face fluxes.
struct ExplicitResidual {
    std::vector<double> dV;
    std::vector<double> du;
    std::vector<double> dE;
};

ExplicitResidual explicit_residual(const ExplicitState& state, const Mesh& mesh,
                                   Boundary boundary);

struct ExplicitRunResult {
    ExplicitState state;
    long steps = 0;
    double t = 0.0;
};

/// March with SSPRK of the given order (2 or 3) at the given CFL number.
ExplicitRunResult run_explicit(ExplicitState state, const Mesh& mesh, double t_end, double cfl,
                               int rk_order, Boundary boundary);

} // namespace silag

#endif

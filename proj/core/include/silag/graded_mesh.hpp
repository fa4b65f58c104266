#ifndef SILAG_GRADED_MESH_HPP
#define SILAG_GRADED_MESH_HPP

#include "silag/mesh.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace silag {

/// Parameters of the erf-shaped mesh-density profile used to grade the mass
/// spacing smoothly across a density interface.
struct GradedMeshParams {
    double beta = 0.25; // transition width as a fraction of the shorter half-layer
    double z0 = 0.0;    // coordinate shift of the transition center
    double dm_left = 0.0;
    double dm_right = 0.0;
};

/// Mass contained in [z1, z2] under the density profile
/// dm/dz = dm_left + (dm_right - dm_left)/2 * (1 + erf((z - z0)/L_beta)),
/// evaluated in closed form.
double interval_mass(const GradedMeshParams& params, double l_beta, double z1, double z2);

/// Solve the 2x2 mass-conservation system for (dm_left, dm_right) given the
/// half-layer densities and extents; beta and z0 fixed.
std::pair<double, double> solve_edge_spacings(double rho_left, double rho_right, double z_left,
                                              double z_right, double beta, double z0);

/// Appendix-style automatic selection of (beta, z0): beta bisected down from
/// 0.25, z0 by nested grid search, accepting quality q <= 0.25.
GradedMeshParams auto_tune_mesh_params(double rho_left, double rho_right, double z_left,
                                       double z_right);

/// Mesh spacings for one half-layer pair on [z_left, z_right] with n cells.
std::vector<double> half_pair_spacings(const GradedMeshParams& params, double z_left,
                                       double z_right, std::size_t n);

/// Full layered mesh: N_layers alternating constant-density layers of equal
/// width, graded half-layer pairs across each interface, terminal half-layers
/// rescaled to exact per-layer mass.
Mesh build_layered_mesh(double rho1, double rho2, std::size_t n_layers, double layer_width,
                        std::size_t n_per_halfpair, double x_left = 0.0);

} // namespace silag

#endif

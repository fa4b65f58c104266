#ifndef SILAG_IMPLICIT_STEP_HPP
#define SILAG_IMPLICIT_STEP_HPP

#include "silag/eos.hpp"
#include "silag/mesh.hpp"

#include <cstddef>
#include <vector>

namespace silag {

enum class Boundary { Wall, Transmissive };

/// Knobs of the implicit Euler step operator.
struct SolverKnobs {
    double inner_tol = 1e-10; // relative pressure tolerance of the wave solve
    double outer_tol = 1e-9;  // relative (V, p) tolerance of the outer loop
    int inner_max = 100;
    int outer_max = 50;
    // Iterate the outer loop until the accelerating pressure matches the EOS
    // pressure of the state it produces (a fully coupled backward-Euler
    // step). Off: single pass with the wave-predictor pressure, the mode in
    // which the spike blend carries the interface stabilization.
    bool outer_reconcile = true;
    bool extra_diffusion = false;     // aggressive second filtering pass on V
    int energy_diffusion_order = 2;   // 1: plain pressure jumps, 2: minmod-reconstructed
    bool pressure_filter = true;      // spike-suppressing energy blend
    Boundary boundary = Boundary::Transmissive;
};

/// Staggered state: V, E (and the derived p_cache) at cell centers, u at the
/// N+1 cell edges. Materials are immutable for the whole run.
struct State {
    std::vector<double> V;
    std::vector<double> E;
    std::vector<double> u;
    std::vector<MaterialParams> mats;
    std::vector<double> p_cache;

    std::size_t size() const { return V.size(); }
};

/// Recompute p_cache from (V, E, interpolated cell velocity).
void refresh_pressure(State& state, const Mesh& mesh);

struct StepDiagnostics {
    int inner_iters = 0; // accumulated over outer iterations
    int outer_iters = 0;
    double max_blend_w = 0.0;
    double energy_drift = 0.0; // |total energy change| beyond boundary fluxes
    double min_V = 0.0;
    double min_p_plus_pi = 0.0;
    bool converged = true;
};

/// One implicit Euler step: wave-equation predictor, volume filtering with
/// conservative redistribution, conservative energy update, pressure blend.
State implicit_euler_step(const State& state, const Mesh& mesh, double dt,
                          const SolverKnobs& knobs, StepDiagnostics* diag = nullptr);

// --- building blocks, exposed for validation ---

std::vector<double> interpolate_cell_velocity(const std::vector<double>& u, const Mesh& mesh);

std::vector<double> update_velocity(const std::vector<double>& p_new,
                                    const std::vector<double>& u_old, const Mesh& mesh, double dt,
                                    Boundary boundary);

std::vector<double> conservative_volume_update(const std::vector<double>& V_old,
                                               const std::vector<double>& u_new, const Mesh& mesh,
                                               double dt);

struct WaveSolveResult {
    std::vector<double> p;
    std::vector<double> V_guess; // Rusanov-flux specific-volume initial guess
    int iterations = 0;
};

/// Inner fixed-point loop of the discrete wave equation (tridiagonal solves
/// with frozen wavespeed per iteration).
WaveSolveResult solve_wave_pressure(const State& state, const Mesh& mesh, double dt,
                                    const SolverKnobs& knobs);

std::vector<double> target_filtered_volume(const std::vector<double>& V_c, const Mesh& mesh);

std::vector<double> redistribute_volume_diffusion(const std::vector<double>& V_c,
                                                  const std::vector<double>& V_star,
                                                  const Mesh& mesh, double dt);

std::vector<double> extra_diffusion_pass(const std::vector<double>& V_star, const Mesh& mesh);

std::vector<double> conservative_energy_update(const State& state,
                                               const std::vector<double>& p_new,
                                               const std::vector<double>& u_new,
                                               const std::vector<double>& V_new, const Mesh& mesh,
                                               double dt, const SolverKnobs& knobs);

std::vector<double> blend_pressure_filter(const std::vector<double>& E_c,
                                          const std::vector<double>& p_new,
                                          const std::vector<double>& V_new,
                                          const std::vector<double>& u_cell, const Mesh& mesh,
                                          const std::vector<MaterialParams>& mats,
                                          double* max_w = nullptr);

} // namespace silag

#endif

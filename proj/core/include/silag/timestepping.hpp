#ifndef SILAG_TIMESTEPPING_HPP
#define SILAG_TIMESTEPPING_HPP

#include "silag/implicit_step.hpp"
#include "silag/mesh.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace silag {

/// Diagonally implicit Runge-Kutta tableau in update form: each stage applies
/// the implicit Euler operator with step gamma*dt to a linear combination of
/// the previous stage states.
struct SdirkTableau {
    int order = 1;
    double gamma = 1.0;
    // combo[s] holds the combination weights of (Q^n, Q_1, ..., Q_s) that feed
    // stage s+1; the final stage result is the step result.
    std::vector<std::vector<double>> combo;

    int stages() const { return static_cast<int>(combo.size()); }
};

/// Tableau factory for orders 1 (implicit Euler), 2 and 3.
SdirkTableau sdirk_tableau(int order);

/// Acoustic timestep: k_eff * min_i dm_i / a_i with the Lagrangian wavespeed a.
double compute_dt(const State& state, const Mesh& mesh, double k_eff);

/// One full SDIRK step of size dt.
State sdirk_step(const State& state, const Mesh& mesh, double dt, const SdirkTableau& tableau,
                 const SolverKnobs& knobs, StepDiagnostics* diag = nullptr);

struct RunConfig {
    double t_end = 0.0;
    double cfl = 1.0;
    int time_order = 2;          // 1: implicit Euler, 2/3: SDIRK
    bool ramp = false;           // ramp the CFL multiplier over the first steps
    double cfl0_fraction = 0.1;  // starting fraction of cfl when ramping
    int ramp_steps = 10;
    long max_steps = 100000000;
    SolverKnobs knobs;
};

struct RunResult {
    State state;
    long steps = 0;
    long stages = 0;
    double t = 0.0;
    double wall_seconds = 0.0;
    long inner_iters_total = 0;
    int outer_iters_max = 0;
    long retries = 0;        // attempts re-run with a halved dt after a failure
    long fallback_steps = 0; // steps completed with the single-stage fallback
    bool all_converged = true;
};

using StepCallback = std::function<void(long step, double t, double dt, const State&,
                                        const StepDiagnostics&)>;

/// March the state to t_end. Throws StepFailure/EosDomainError on breakdown.
RunResult run_to_time(State state, const Mesh& mesh, const RunConfig& config,
                      const StepCallback& callback = {});

} // namespace silag

#endif

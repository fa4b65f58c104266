#include "silag/timestepping.hpp"

#include "silag/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace silag {

SdirkTableau sdirk_tableau(int order) {
    SdirkTableau t;
    t.order = order;
    switch (order) {
    case 1:
        t.gamma = 1.0;
        t.combo = {{1.0}};
        return t;
    case 2: {
        const double g = 1.0 - 1.0 / std::sqrt(2.0);
        const double a21 = 1.0 - g;
        const double c21 = a21 / g;
        t.gamma = g;
        t.combo = {{1.0}, {1.0 - c21, c21}};
        return t;
    }
    case 3: {
        const double g = 0.435866521508459;
        // The diagonal coefficient must be the middle root of the stage-order
        // cubic; guard against transcription drift.
        const double cubic = g * g * g - 3.0 * g * g + 1.5 * g - 1.0 / 6.0;
        if (std::abs(cubic) > 1e-12)
            throw ConfigError("sdirk_tableau: third-order diagonal coefficient is inconsistent");
        const double k_a = 1.0 - 4.0 * g + 2.0 * g * g;
        const double k_b = 3.0 * g * (2.0 - 3.0 * g + g * g) - 1.0;
        const double k_c = (2.0 / 3.0 - 3.0 * g + 2.0 * g * g) / k_a;
        const double k_d = -3.0 * k_a * k_a / (4.0 * k_b);
        const double a21 = k_c - g;
        const double a31 = 1.0 - k_d - g;
        const double a32 = k_d;
        const double c21 = a21 / g;
        const double c32 = a32 / g;
        const double c31 = (a31 - c32 * a21) / g;
        t.gamma = g;
        t.combo = {{1.0}, {1.0 - c21, c21}, {1.0 - c31 - c32, c31, c32}};
        return t;
    }
    default:
        throw ConfigError("sdirk_tableau: supported time orders are 1, 2, 3");
    }
}

double compute_dt(const State& state, const Mesh& mesh, double k_eff) {
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double a = wavespeed(state.V[i], state.p_cache[i], state.mats[i]);
        dt = std::min(dt, mesh.dm[i] / a);
    }
    return k_eff * dt;
}

namespace {

State combine_states(const std::vector<const State*>& history, const std::vector<double>& weights,
                     const Mesh& mesh) {
    State out = *history.front(); // mats copied from Q^n
    const std::size_t n = out.size();
    std::fill(out.V.begin(), out.V.end(), 0.0);
    std::fill(out.E.begin(), out.E.end(), 0.0);
    std::fill(out.u.begin(), out.u.end(), 0.0);
    std::vector<double> p_lin(n, 0.0);
    for (std::size_t s = 0; s < weights.size(); ++s) {
        const State& q = *history[s];
        const double w = weights[s];
        for (std::size_t i = 0; i < n; ++i) {
            out.V[i] += w * q.V[i];
            out.E[i] += w * q.E[i];
            p_lin[i] += w * q.p_cache[i];
        }
        for (std::size_t i = 0; i <= n; ++i)
            out.u[i] += w * q.u[i];
    }
    // Stage combinations carry negative weights and can overshoot out of the
    // admissible region near shock fronts. Where the combined state admits an
    // equation-of-state pressure, use it; elsewhere fall back to the linear
    // combination of the stage pressures so the inner solve sees a physically
    // scaled acoustic field while the volume filter restores admissibility.
    const auto u_cell = interpolate_cell_velocity(out.u, mesh);
    out.p_cache.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const MaterialParams& mat = out.mats[i];
        if (out.V[i] > 0.0) {
            const double p = (mat.gamma - 1.0) * (out.E[i] - 0.5 * u_cell[i] * u_cell[i]) /
                                 out.V[i] -
                             mat.gamma * mat.pi;
            if (p + mat.pi > 0.0) {
                out.p_cache[i] = p;
                continue;
            }
        }
        out.p_cache[i] = p_lin[i];
    }
    return out;
}

} // namespace

State sdirk_step(const State& state, const Mesh& mesh, double dt, const SdirkTableau& tableau,
                 const SolverKnobs& knobs, StepDiagnostics* diag) {
    StepDiagnostics local;
    StepDiagnostics& d = diag ? *diag : local;
    d = StepDiagnostics{};

    std::vector<State> stages;
    stages.reserve(tableau.stages());
    std::vector<const State*> history = {&state};
    for (int s = 0; s < tableau.stages(); ++s) {
        State input = combine_states(history, tableau.combo[s], mesh);
        StepDiagnostics stage_diag;
        stages.push_back(
            implicit_euler_step(input, mesh, tableau.gamma * dt, knobs, &stage_diag));
        history.push_back(&stages.back());
        d.inner_iters += stage_diag.inner_iters;
        d.outer_iters = std::max(d.outer_iters, stage_diag.outer_iters);
        d.max_blend_w = std::max(d.max_blend_w, stage_diag.max_blend_w);
        d.energy_drift += stage_diag.energy_drift;
        d.converged = d.converged && stage_diag.converged;
    }
    State result = std::move(stages.back());
    d.min_V = *std::min_element(result.V.begin(), result.V.end());
    d.min_p_plus_pi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < result.size(); ++i)
        d.min_p_plus_pi = std::min(d.min_p_plus_pi, result.p_cache[i] + result.mats[i].pi);
    return result;
}

RunResult run_to_time(State state, const Mesh& mesh, const RunConfig& config,
                      const StepCallback& callback) {
    if (!(config.t_end >= 0.0))
        throw ConfigError("run_to_time: t_end must be nonnegative");
    const SdirkTableau tableau = sdirk_tableau(config.time_order);
    const SdirkTableau euler_tableau = sdirk_tableau(1);
    refresh_pressure(state, mesh);

    RunResult result;
    const auto wall_start = std::chrono::steady_clock::now();
    double t = 0.0;
    long step = 0;
    while (t < config.t_end && step < config.max_steps) {
        double k_eff = config.cfl;
        if (config.ramp) {
            const double frac =
                std::min(1.0, static_cast<double>(step) / std::max(1, config.ramp_steps));
            k_eff = config.cfl * (config.cfl0_fraction + (1.0 - config.cfl0_fraction) * frac);
        }
        double dt = compute_dt(state, mesh, k_eff);
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw StepFailure("run_to_time: nonpositive or non-finite timestep", -1);
        if (t + dt > config.t_end)
            dt = config.t_end - t;

        // Multi-stage step inputs are extrapolated combinations and can leave
        // the admissible region at strong shocks. On a failed step, first
        // retry with a halved dt; if that does not help, fall back to a
        // single-stage (implicit Euler) step at the original size, which has
        // no extrapolated stage inputs. The local order reduction at such
        // isolated troubled steps mirrors what slope limiters do in space.
        StepDiagnostics diag;
        constexpr int kHalvings = 3;
        constexpr int kMaxRetries = 10;
        const double dt_full = dt;
        for (int attempt = 0;; ++attempt) {
            const bool fallback = attempt >= kHalvings && tableau.stages() > 1;
            const SdirkTableau& tab = fallback ? euler_tableau : tableau;
            if (fallback && attempt == kHalvings)
                dt = dt_full;
            try {
                state = sdirk_step(state, mesh, dt, tab, config.knobs, &diag);
                if (fallback)
                    ++result.fallback_steps;
                break;
            } catch (const StepFailure&) {
                if (attempt >= kMaxRetries)
                    throw;
                dt *= 0.5;
                ++result.retries;
            } catch (const EosDomainError&) {
                if (attempt >= kMaxRetries)
                    throw;
                dt *= 0.5;
                ++result.retries;
            }
        }
        t += dt;
        ++step;
        result.stages += tableau.stages();
        result.inner_iters_total += diag.inner_iters;
        result.outer_iters_max = std::max(result.outer_iters_max, diag.outer_iters);
        result.all_converged = result.all_converged && diag.converged;
        if (callback)
            callback(step, t, dt, state, diag);
    }
    const auto wall_end = std::chrono::steady_clock::now();
    result.state = std::move(state);
    result.steps = step;
    result.t = t;
    result.wall_seconds = std::chrono::duration<double>(wall_end - wall_start).count();
    return result;
}

} // namespace silag

#include "silag/explicit_scheme.hpp"

#include "silag/errors.hpp"
#include "silag/exact_riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace silag {

ExplicitState collocate_state(const State& state, const Mesh& mesh) {
    ExplicitState out;
    out.V = state.V;
    out.E = state.E;
    out.mats = state.mats;
    out.u = interpolate_cell_velocity(state.u, mesh);
    return out;
}

namespace {

double minmod3(double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0)
        return std::min({a, b, c});
    if (a < 0.0 && b < 0.0 && c < 0.0)
        return std::max({a, b, c});
    return 0.0;
}

struct FaceStates {
    // Reconstructed primitive traces at the left/right side of each of the
    // n+1 faces, including ghost-extended boundary faces.
    std::vector<Primitive> left;
    std::vector<Primitive> right;
};

FaceStates reconstruct(const ExplicitState& state, const Mesh& mesh, Boundary boundary) {
    const std::size_t n = state.size();
    constexpr double kTheta = 1.3;

    // Ghost-extended primitive arrays (zero-gradient; walls mirror velocity).
    std::vector<double> v(n + 2), u(n + 2), p(n + 2), dm(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        v[i + 1] = state.V[i];
        u[i + 1] = state.u[i];
        p[i + 1] = pressure_from_conserved(state.V[i], state.E[i], state.u[i], state.mats[i]);
        dm[i + 1] = mesh.dm[i];
    }
    v[0] = v[1];
    p[0] = p[1];
    u[0] = boundary == Boundary::Wall ? -u[1] : u[1];
    dm[0] = dm[1];
    v[n + 1] = v[n];
    p[n + 1] = p[n];
    u[n + 1] = boundary == Boundary::Wall ? -u[n] : u[n];
    dm[n + 1] = dm[n];

    const auto slope = [&](const std::vector<double>& w, std::size_t g) {
        const double dml = 0.5 * (dm[g - 1] + dm[g]);
        const double dmr = 0.5 * (dm[g] + dm[g + 1]);
        return minmod3(kTheta * (w[g] - w[g - 1]) / dml,
                       (w[g + 1] - w[g - 1]) / (dml + dmr),
                       kTheta * (w[g + 1] - w[g]) / dmr);
    };

    FaceStates faces;
    faces.left.resize(n + 1);
    faces.right.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        // Left trace from cell j-1 (ghost index j), right trace from cell j
        // (ghost index j+1). Ghost cells take zero slopes.
        {
            const std::size_t g = j;
            double sv = 0.0, su = 0.0, sp = 0.0;
            if (g >= 1 && g <= n) {
                sv = slope(v, g);
                su = slope(u, g);
                sp = slope(p, g);
            }
            const double h = 0.5 * dm[g];
            faces.left[j] = {1.0 / (v[g] + sv * h), u[g] + su * h, p[g] + sp * h};
        }
        {
            const std::size_t g = j + 1;
            double sv = 0.0, su = 0.0, sp = 0.0;
            if (g >= 1 && g <= n) {
                sv = slope(v, g);
                su = slope(u, g);
                sp = slope(p, g);
            }
            const double h = 0.5 * dm[g];
            faces.right[j] = {1.0 / (v[g] - sv * h), u[g] - su * h, p[g] - sp * h};
        }
    }
    return faces;
}

} // namespace

ExplicitResidual explicit_residual(const ExplicitState& state, const Mesh& mesh,
                                   Boundary boundary) {
    const std::size_t n = state.size();
    const FaceStates faces = reconstruct(state, mesh, boundary);

    // Lagrangian flux (-u*, p*, u* p*) at each face from the exact solver.
    std::vector<double> f_v(n + 1), f_u(n + 1), f_e(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const MaterialParams& mat_l = state.mats[j == 0 ? 0 : j - 1];
        const MaterialParams& mat_r = state.mats[j == n ? n - 1 : j];
        const RiemannSide left{faces.left[j].rho, faces.left[j].u, faces.left[j].p, mat_l};
        const RiemannSide right{faces.right[j].rho, faces.right[j].u, faces.right[j].p, mat_r};
        const StarState star = solve_star(left, right);
        f_v[j] = -star.u_star;
        f_u[j] = star.p_star;
        f_e[j] = star.u_star * star.p_star;
    }

    ExplicitResidual res;
    res.dV.resize(n);
    res.du.resize(n);
    res.dE.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double inv_dm = 1.0 / mesh.dm[i];
        res.dV[i] = -(f_v[i + 1] - f_v[i]) * inv_dm;
        res.du[i] = -(f_u[i + 1] - f_u[i]) * inv_dm;
        res.dE[i] = -(f_e[i + 1] - f_e[i]) * inv_dm;
    }
    return res;
}

namespace {

ExplicitState euler_substep(const ExplicitState& state, const Mesh& mesh, double dt,
                            Boundary boundary) {
    const ExplicitResidual res = explicit_residual(state, mesh, boundary);
    ExplicitState out = state;
    for (std::size_t i = 0; i < state.size(); ++i) {
        out.V[i] += dt * res.dV[i];
        out.u[i] += dt * res.du[i];
        out.E[i] += dt * res.dE[i];
        if (!(out.V[i] > 0.0))
            throw StepFailure("explicit step: specific volume positivity lost",
                              static_cast<int>(i));
    }
    return out;
}

ExplicitState convex(const ExplicitState& a, double wa, const ExplicitState& b, double wb) {
    ExplicitState out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.V[i] = wa * a.V[i] + wb * b.V[i];
        out.u[i] = wa * a.u[i] + wb * b.u[i];
        out.E[i] = wa * a.E[i] + wb * b.E[i];
    }
    return out;
}

double explicit_dt(const ExplicitState& state, const Mesh& mesh, double cfl) {
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double p =
            pressure_from_conserved(state.V[i], state.E[i], state.u[i], state.mats[i]);
        const double a = wavespeed(state.V[i], p, state.mats[i]);
        dt = std::min(dt, mesh.dm[i] / a);
    }
    return cfl * dt;
}

} // namespace

ExplicitRunResult run_explicit(ExplicitState state, const Mesh& mesh, double t_end, double cfl,
                               int rk_order, Boundary boundary) {
    if (rk_order != 2 && rk_order != 3)
        throw ConfigError("run_explicit: supported Runge-Kutta orders are 2 and 3");
    ExplicitRunResult result;
    double t = 0.0;
    long step = 0;
    while (t < t_end) {
        double dt = explicit_dt(state, mesh, cfl);
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw StepFailure("run_explicit: nonpositive or non-finite timestep", -1);
        if (t + dt > t_end)
            dt = t_end - t;
        if (rk_order == 2) {
            const ExplicitState q1 = euler_substep(state, mesh, dt, boundary);
            const ExplicitState q2 = euler_substep(q1, mesh, dt, boundary);
            state = convex(state, 0.5, q2, 0.5);
        } else {
            const ExplicitState q1 = euler_substep(state, mesh, dt, boundary);
            const ExplicitState q1b = euler_substep(q1, mesh, dt, boundary);
            const ExplicitState q2 = convex(state, 0.75, q1b, 0.25);
            const ExplicitState q2b = euler_substep(q2, mesh, dt, boundary);
            state = convex(state, 1.0 / 3.0, q2b, 2.0 / 3.0);
        }
        t += dt;
        ++step;
    }
    result.state = std::move(state);
    result.steps = step;
    result.t = t;
    return result;
}

} // namespace silag

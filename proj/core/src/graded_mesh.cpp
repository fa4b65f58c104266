#include "silag/graded_mesh.hpp"

#include "silag/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace silag {

double interval_mass(const GradedMeshParams& params, double l_beta, double z1, double z2) {
    const double dml = params.dm_left;
    const double dmr = params.dm_right;
    const double zeta1 = (z1 - params.z0) / l_beta;
    const double zeta2 = (z2 - params.z0) / l_beta;
    const double sqrt_pi = std::sqrt(M_PI);
    return l_beta * (dmr - dml) / (2.0 * sqrt_pi) *
               (std::exp(-zeta2 * zeta2) - std::exp(-zeta1 * zeta1)) +
           0.5 * (dmr + dml) * (z2 - z1) +
           0.5 * (dmr - dml) *
               ((z2 - params.z0) * std::erf(zeta2) - (z1 - params.z0) * std::erf(zeta1));
}

std::pair<double, double> solve_edge_spacings(double rho_left, double rho_right, double z_left,
                                              double z_right, double beta, double z0) {
    if (!(z_left < 0.0 && z_right > 0.0))
        throw ConfigError("solve_edge_spacings: need z_left < 0 < z_right");
    if (!(beta > 0.0))
        throw ConfigError("solve_edge_spacings: beta must be positive");
    const double l_beta = beta * std::min(-z_left, z_right);
    // interval_mass is linear in (dm_left, dm_right); extract the coefficients
    // by evaluating it at the unit vectors, then impose the half-layer masses.
    GradedMeshParams unit_l{beta, z0, 1.0, 0.0};
    GradedMeshParams unit_r{beta, z0, 0.0, 1.0};
    const double a11 = interval_mass(unit_l, l_beta, z_left, 0.0);
    const double a12 = interval_mass(unit_r, l_beta, z_left, 0.0);
    const double a21 = interval_mass(unit_l, l_beta, 0.0, z_right);
    const double a22 = interval_mass(unit_r, l_beta, 0.0, z_right);
    const double mass_l = -rho_left * z_left;
    const double mass_r = rho_right * z_right;
    const double det = a11 * a22 - a12 * a21;
    const double scale = std::abs(a11 * a22) + std::abs(a12 * a21);
    if (std::abs(det) <= 1e-14 * (scale + 1e-300))
        throw ConfigError("solve_edge_spacings: degenerate geometry (singular mass constraints)");
    const double dm_left = (mass_l * a22 - a12 * mass_r) / det;
    const double dm_right = (a11 * mass_r - mass_l * a21) / det;
    return {dm_left, dm_right};
}

namespace {

double tuning_cost(double rho_lo, double rho_hi, double z_left, double z_right, double beta,
                   double z0) {
    const auto [dml, dmr] = solve_edge_spacings(rho_lo, rho_hi, z_left, z_right, beta, z0);
    double q = std::abs(dml * rho_hi / (dmr * rho_lo) - 1.0);
    if (!(dml > 0.0) || !(dmr > 0.0))
        q += 1e20;
    return q;
}

// Grid search for z0 on [lo, hi] at fixed beta, refined once around the winner.
std::pair<double, double> best_z0(double rho_lo, double rho_hi, double z_left, double z_right,
                                  double beta) {
    constexpr int kPoints = 201;
    double lo = z_left / 2.0;
    double hi = z_right / 2.0;
    double z_best = 0.0;
    double q_best = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 2; ++pass) {
        int i_best = 0;
        for (int i = 0; i < kPoints; ++i) {
            const double z0 = lo + (hi - lo) * static_cast<double>(i) / (kPoints - 1);
            const double q = tuning_cost(rho_lo, rho_hi, z_left, z_right, beta, z0);
            if (q < q_best) {
                q_best = q;
                z_best = z0;
                i_best = i;
            }
        }
        const double step = (hi - lo) / (kPoints - 1);
        lo = z_best - (i_best > 0 ? step : 0.0);
        hi = z_best + (i_best < kPoints - 1 ? step : 0.0);
    }
    return {z_best, q_best};
}

} // namespace

GradedMeshParams auto_tune_mesh_params(double rho_left, double rho_right, double z_left,
                                       double z_right) {
    if (!(rho_left > 0.0 && rho_right > 0.0))
        throw ConfigError("auto_tune_mesh_params: densities must be positive");
    const bool swapped = rho_left > rho_right;
    const double rho_lo = std::min(rho_left, rho_right);
    const double rho_hi = std::max(rho_left, rho_right);
    constexpr double kQualityThreshold = 0.25;
    constexpr int kMaxHalvings = 40;

    double beta = 0.25;
    double q_best_overall = std::numeric_limits<double>::infinity();
    for (int halving = 0; halving <= kMaxHalvings; ++halving, beta *= 0.5) {
        if (beta < 1e-6)
            break;
        const auto [z0, q] = best_z0(rho_lo, rho_hi, z_left, z_right, beta);
        q_best_overall = std::min(q_best_overall, q);
        if (q <= kQualityThreshold) {
            const double z0_out = swapped ? -z0 : z0;
            const auto [dml, dmr] =
                solve_edge_spacings(rho_left, rho_right, z_left, z_right, beta, z0_out);
            return GradedMeshParams{beta, z0_out, dml, dmr};
        }
    }
    throw MeshTuningError("auto_tune_mesh_params: quality threshold not reached", q_best_overall);
}

std::vector<double> half_pair_spacings(const GradedMeshParams& params, double z_left,
                                       double z_right, std::size_t n) {
    const double l_beta = params.beta * std::min(-z_left, z_right);
    const double dz = (z_right - z_left) / static_cast<double>(n);
    std::vector<double> dm(n);
    for (std::size_t i = 0; i < n; ++i)
        dm[i] = interval_mass(params, l_beta, z_left + static_cast<double>(i) * dz,
                              z_left + static_cast<double>(i + 1) * dz);
    return dm;
}

Mesh build_layered_mesh(double rho1, double rho2, std::size_t n_layers, double layer_width,
                        std::size_t n_per_halfpair, double x_left) {
    if (n_layers < 2)
        throw ConfigError("build_layered_mesh: need at least 2 layers");
    if (n_per_halfpair < 10)
        throw ConfigError("build_layered_mesh: need at least 10 cells per half-layer pair");
    if (n_per_halfpair % 2 != 0)
        throw ConfigError("build_layered_mesh: cells per half-layer pair must be even so the "
                          "material interface lands on a cell edge");
    const double half = layer_width / 2.0;

    // One tuned profile per orientation; the reversed profile satisfies the
    // mirrored constraints exactly, which keeps the tiling symmetric.
    std::vector<double> profile_12;
    if (rho1 == rho2) {
        profile_12.assign(n_per_halfpair, rho1 * layer_width / static_cast<double>(n_per_halfpair));
    } else {
        const auto params = auto_tune_mesh_params(rho1, rho2, -half, half);
        profile_12 = half_pair_spacings(params, -half, half, n_per_halfpair);
    }
    std::vector<double> profile_21(profile_12.rbegin(), profile_12.rend());

    const auto layer_rho = [&](std::size_t j) { return j % 2 == 0 ? rho1 : rho2; };

    std::vector<double> dm;
    dm.reserve(n_layers * n_per_halfpair);
    const std::size_t nh = n_per_halfpair / 2;

    // Leading terminal half-layer: replicate the first interior spacing, then
    // rescale to the exact half-layer mass.
    {
        const double spacing = profile_12.front();
        const double target = layer_rho(0) * half;
        const double factor = target / (static_cast<double>(nh) * spacing);
        dm.insert(dm.end(), nh, spacing * factor);
    }
    for (std::size_t k = 0; k + 1 < n_layers; ++k) {
        const auto& profile = (k % 2 == 0) ? profile_12 : profile_21;
        dm.insert(dm.end(), profile.begin(), profile.end());
    }
    {
        const auto& last_profile = (n_layers % 2 == 0) ? profile_12 : profile_21;
        const double spacing = last_profile.back();
        const double target = layer_rho(n_layers - 1) * half;
        const double factor = target / (static_cast<double>(nh) * spacing);
        dm.insert(dm.end(), nh, spacing * factor);
    }
    return make_mesh(std::move(dm), x_left);
}

} // namespace silag

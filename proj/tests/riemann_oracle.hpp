#ifndef SILAG_TESTS_RIEMANN_ORACLE_HPP
#define SILAG_TESTS_RIEMANN_ORACLE_HPP

// Independent cross-checks for the exact Riemann solver: a bisection-based
// star-state oracle and jump-condition residuals, written directly from the
// shock (Rankine-Hugoniot) and rarefaction (isentrope) relations. Everything
// works on the Pi-shifted pressure P = p + Pi, which reduces the stiffened
// gas to ideal-gas algebra.

#include "silag/eos.hpp"
#include "silag/exact_riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace silag_test {

inline double side_function(double p, const silag::RiemannSide& s) {
    const double g = s.mat.gamma;
    const double ps = p + s.mat.pi;       // shifted candidate pressure
    const double pss = s.p + s.mat.pi;    // shifted side pressure
    if (ps > pss) {                       // shock branch
        const double a_coef = 2.0 / ((g + 1.0) * s.rho);
        const double b_coef = (g - 1.0) / (g + 1.0) * pss;
        return (ps - pss) * std::sqrt(a_coef / (ps + b_coef));
    }
    const double a_sound = std::sqrt(g * pss / s.rho);
    return 2.0 * a_sound / (g - 1.0) * (std::pow(ps / pss, (g - 1.0) / (2.0 * g)) - 1.0);
}

struct OracleStar {
    double p_star;
    double u_star;
    double rho_star_left;
    double rho_star_right;
};

/// Plain bisection on the pressure function; deliberately slow and simple so
/// it shares no machinery with the production root finder.
inline OracleStar bisection_star(const silag::RiemannSide& l, const silag::RiemannSide& r) {
    const auto total = [&](double p) { return side_function(p, l) + side_function(p, r) + r.u - l.u; };
    const double floor = std::max(-l.mat.pi, -r.mat.pi);
    const double scale = std::max({std::abs(l.p), std::abs(r.p), l.mat.pi, r.mat.pi, 1e-30});
    double lo = floor + 1e-14 * scale;
    double hi = std::max({l.p, r.p, floor + scale});
    for (int i = 0; i < 200 && total(hi) < 0.0; ++i)
        hi = floor + (hi - floor) * 4.0;
    if (!(total(lo) < 0.0 && total(hi) > 0.0))
        throw std::runtime_error("bisection_star: no sign change (vacuum?)");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) < 0.0 ? lo : hi) = mid;
    }
    OracleStar star;
    star.p_star = 0.5 * (lo + hi);
    star.u_star = 0.5 * (l.u - side_function(star.p_star, l) + r.u + side_function(star.p_star, r));
    const auto star_rho = [&](const silag::RiemannSide& s) {
        const double g = s.mat.gamma;
        const double ratio = (star.p_star + s.mat.pi) / (s.p + s.mat.pi);
        if (ratio > 1.0) {
            const double gr = (g - 1.0) / (g + 1.0);
            return s.rho * (ratio + gr) / (gr * ratio + 1.0);
        }
        return s.rho * std::pow(ratio, 1.0 / g);
    };
    star.rho_star_left = star_rho(l);
    star.rho_star_right = star_rho(r);
    return star;
}

struct SideResiduals {
    bool is_shock = false;
    double jump = 0.0;      // Hugoniot energy residual (shock) or isentrope residual
    double velocity = 0.0;  // velocity jump relation or Riemann invariant residual
};

/// Scaled residuals of the wave relations on one side of a solved star state.
/// `left` picks the sign conventions of the left-running wave.
inline SideResiduals side_residuals(const silag::RiemannSide& s, const silag::StarState& star,
                                    bool left) {
    const double rho_star = left ? star.rho_star_left : star.rho_star_right;
    const double g = s.mat.gamma;
    const double ps = star.p_star + s.mat.pi;
    const double pss = s.p + s.mat.pi;
    const double uscale = std::max({std::abs(s.u), std::abs(star.u_star),
                                    std::sqrt(g * pss / s.rho), 1e-30});
    SideResiduals res;
    res.is_shock = ps > pss;
    if (res.is_shock) {
        const double v_side = 1.0 / s.rho;
        const double v_star = 1.0 / rho_star;
        const double e_side = silag::internal_energy(v_side, s.p, s.mat);
        const double e_star = silag::internal_energy(v_star, star.p_star, s.mat);
        res.jump = (e_star - e_side - 0.5 * (star.p_star + s.p) * (v_side - v_star)) /
                   std::max(std::abs(e_star), std::abs(e_side));
        const double q = std::sqrt((star.p_star - s.p) / (v_side - v_star)); // mass flux
        const double u_pred = left ? s.u - (star.p_star - s.p) / q : s.u + (star.p_star - s.p) / q;
        res.velocity = (star.u_star - u_pred) / uscale;
    } else {
        res.jump = (ps / std::pow(rho_star, g)) / (pss / std::pow(s.rho, g)) - 1.0;
        const double a_side = std::sqrt(g * pss / s.rho);
        const double a_star = std::sqrt(g * ps / rho_star);
        const double sign = left ? 1.0 : -1.0;
        res.velocity = ((s.u + sign * 2.0 * a_side / (g - 1.0)) -
                        (star.u_star + sign * 2.0 * a_star / (g - 1.0))) /
                       uscale;
    }
    return res;
}

} // namespace silag_test

#endif

#include "silag/exact_riemann.hpp"

#include "silag/errors.hpp"

#include <algorithm>
#include <cmath>

namespace silag {

namespace {

struct SideFunction {
    // Value and derivative of the classical pressure function for one side of
    // the Riemann problem, with all pressures shifted by the side's Pi.
    double f;
    double df;
};

SideFunction side_function(double p, const RiemannSide& s) {
    const double g = s.mat.gamma;
    const double pk = s.p + s.mat.pi;  // shifted data pressure
    const double ps = p + s.mat.pi;    // shifted trial pressure
    if (p > s.p) {
        // Shock branch (Rankine-Hugoniot).
        const double a_coef = 2.0 / ((g + 1.0) * s.rho);
        const double b_coef = (g - 1.0) / (g + 1.0) * pk;
        const double root = std::sqrt(a_coef / (ps + b_coef));
        return {(p - s.p) * root, root * (1.0 - 0.5 * (p - s.p) / (ps + b_coef))};
    }
    // Rarefaction branch (isentrope in the shifted pressure).
    const double a_k = std::sqrt(g * pk / s.rho);
    const double ratio = ps / pk;
    return {2.0 * a_k / (g - 1.0) * (std::pow(ratio, (g - 1.0) / (2.0 * g)) - 1.0),
            std::pow(ratio, -(g + 1.0) / (2.0 * g)) / (s.rho * a_k)};
}

double star_density(double p_star, const RiemannSide& s) {
    const double g = s.mat.gamma;
    const double ratio = (p_star + s.mat.pi) / (s.p + s.mat.pi);
    if (p_star > s.p) {
        const double gm = (g - 1.0) / (g + 1.0);
        return s.rho * (ratio + gm) / (gm * ratio + 1.0);
    }
    return s.rho * std::pow(ratio, 1.0 / g);
}

} // namespace

StarState solve_star(const RiemannSide& left, const RiemannSide& right) {
    if (!(left.rho > 0.0) || !(right.rho > 0.0))
        throw EosDomainError("solve_star: nonpositive density");
    if (!(left.p + left.mat.pi > 0.0) || !(right.p + right.mat.pi > 0.0))
        throw EosDomainError("solve_star: nonpositive p + Pi");

    const double du = right.u - left.u;
    const double pi_min = std::min(left.mat.pi, right.mat.pi);
    const double scale = std::max(left.p + left.mat.pi, right.p + right.mat.pi);
    const double p_lo = std::max(-left.mat.pi, -right.mat.pi) + 1e-12 * scale;

    const auto total = [&](double p) {
        return side_function(p, left).f + side_function(p, right).f + du;
    };

    if (total(p_lo) > 0.0)
        throw VacuumError("solve_star: pressure positivity lost (vacuum formation)");

    // Establish an upper bracket.
    double p_hi = std::max({left.p, right.p, p_lo + scale});
    for (int i = 0; i < 200 && total(p_hi) <= 0.0; ++i)
        p_hi = p_lo + 2.0 * (p_hi - p_lo);
    if (total(p_hi) <= 0.0)
        throw VacuumError("solve_star: failed to bracket the star pressure");

    // Safeguarded Newton with bisection fallback.
    double lo = p_lo, hi = p_hi;
    double p = std::clamp(0.5 * (left.p + right.p), lo, hi);
    constexpr double kTol = 1e-12;
    for (int it = 0; it < 200; ++it) {
        const SideFunction fl = side_function(p, left);
        const SideFunction fr = side_function(p, right);
        const double f = fl.f + fr.f + du;
        if (f > 0.0)
            hi = p;
        else
            lo = p;
        double p_next = p - f / (fl.df + fr.df);
        if (!(p_next > lo && p_next < hi))
            p_next = 0.5 * (lo + hi);
        const double change = std::abs(p_next - p) / (p_next + pi_min);
        p = p_next;
        if (change < kTol)
            break;
    }

    StarState star;
    star.p_star = p;
    const double fl = side_function(p, left).f;
    const double fr = side_function(p, right).f;
    star.u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
    star.rho_star_left = star_density(p, left);
    star.rho_star_right = star_density(p, right);
    star.left_wave = p > left.p ? WaveType::Shock : WaveType::Rarefaction;
    star.right_wave = p > right.p ? WaveType::Shock : WaveType::Rarefaction;
    return star;
}

Primitive sample(const RiemannSide& left, const RiemannSide& right, const StarState& star,
                 double xi) {
    const double ps = star.p_star;
    if (xi <= star.u_star) {
        const double g = left.mat.gamma;
        const double pk = left.p + left.mat.pi;
        const double a_l = std::sqrt(g * pk / left.rho);
        if (star.left_wave == WaveType::Shock) {
            const double ratio = (ps + left.mat.pi) / pk;
            const double s_l =
                left.u - a_l * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
            if (xi < s_l)
                return {left.rho, left.u, left.p};
            return {star.rho_star_left, star.u_star, ps};
        }
        const double a_star =
            std::sqrt(g * (ps + left.mat.pi) / star.rho_star_left);
        if (xi < left.u - a_l)
            return {left.rho, left.u, left.p};
        if (xi > star.u_star - a_star)
            return {star.rho_star_left, star.u_star, ps};
        // Inside the left fan.
        const double factor = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * a_l) * (left.u - xi);
        const double rho = left.rho * std::pow(factor, 2.0 / (g - 1.0));
        const double u = 2.0 / (g + 1.0) * (a_l + 0.5 * (g - 1.0) * left.u + xi);
        const double p = pk * std::pow(factor, 2.0 * g / (g - 1.0)) - left.mat.pi;
        return {rho, u, p};
    }
    const double g = right.mat.gamma;
    const double pk = right.p + right.mat.pi;
    const double a_r = std::sqrt(g * pk / right.rho);
    if (star.right_wave == WaveType::Shock) {
        const double ratio = (ps + right.mat.pi) / pk;
        const double s_r =
            right.u + a_r * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
        if (xi > s_r)
            return {right.rho, right.u, right.p};
        return {star.rho_star_right, star.u_star, ps};
    }
    const double a_star = std::sqrt(g * (ps + right.mat.pi) / star.rho_star_right);
    if (xi > right.u + a_r)
        return {right.rho, right.u, right.p};
    if (xi < star.u_star + a_star)
        return {star.rho_star_right, star.u_star, ps};
    const double factor = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * a_r) * (right.u - xi);
    const double rho = right.rho * std::pow(factor, 2.0 / (g - 1.0));
    const double u = 2.0 / (g + 1.0) * (-a_r + 0.5 * (g - 1.0) * right.u + xi);
    const double p = pk * std::pow(factor, 2.0 * g / (g - 1.0)) - right.mat.pi;
    return {rho, u, p};
}

} // namespace silag

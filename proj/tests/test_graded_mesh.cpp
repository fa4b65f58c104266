#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "silag/errors.hpp"
#include "silag/graded_mesh.hpp"

#include <cmath>
#include <functional>
#include <vector>

using namespace silag;

namespace {

double profile(const GradedMeshParams& params, double l_beta, double z) {
    return params.dm_left +
           0.5 * (params.dm_right - params.dm_left) * (1.0 + std::erf((z - params.z0) / l_beta));
}

// Adaptive Simpson quadrature; the independent oracle for interval_mass.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace

TEST_CASE("interval mass closed form vs quadrature") {
    const GradedMeshParams params{0.2, 0.1, 0.3, 2.0};
    const double l_beta = 0.2 * 0.8;
    const auto f = [&](double z) { return profile(params, l_beta, z); };
    const std::vector<std::pair<double, double>> intervals{
        {-0.8, 0.0}, {0.0, 1.0}, {-0.5, 0.7}, {0.05, 0.15}};
    for (const auto& [z1, z2] : intervals) {
        const double exact = interval_mass(params, l_beta, z1, z2);
        const double quad = integrate(f, z1, z2, 1e-13);
        CHECK(exact == doctest::Approx(quad).epsilon(1e-10));
    }
}

TEST_CASE("interval mass trivial cases and additivity") {
    const GradedMeshParams flat{0.25, 0.0, 0.7, 0.7};
    CHECK(interval_mass(flat, 0.1, -0.3, 0.5) == doctest::Approx(0.7 * 0.8).epsilon(1e-14));

    const GradedMeshParams params{0.25, -0.05, 0.4, 1.3};
    CHECK(interval_mass(params, 0.2, 0.3, 0.3) == doctest::Approx(0.0));
    const double a = interval_mass(params, 0.2, -1.0, 0.2);
    const double b = interval_mass(params, 0.2, 0.2, 0.9);
    const double c = interval_mass(params, 0.2, -1.0, 0.9);
    CHECK(a + b == doctest::Approx(c).epsilon(1e-13));
}

TEST_CASE("edge spacings satisfy the half-layer masses") {
    const double rho_l = 2.0, rho_r = 17.0, z_l = -0.6, z_r = 1.1;
    const double beta = 0.2, z0 = 0.05;
    const auto [dml, dmr] = solve_edge_spacings(rho_l, rho_r, z_l, z_r, beta, z0);
    const double l_beta = beta * std::min(-z_l, z_r);
    const GradedMeshParams params{beta, z0, dml, dmr};
    CHECK(interval_mass(params, l_beta, z_l, 0.0) ==
          doctest::Approx(-rho_l * z_l).epsilon(1e-11));
    CHECK(interval_mass(params, l_beta, 0.0, z_r) ==
          doctest::Approx(rho_r * z_r).epsilon(1e-11));

    // Symmetric geometry with equal densities: equal spacings.
    const auto [sl, sr] = solve_edge_spacings(3.0, 3.0, -1.0, 1.0, 0.25, 0.0);
    CHECK(sl == doctest::Approx(sr).epsilon(1e-12));
    CHECK(sl > 0.0);

    CHECK_THROWS_AS(solve_edge_spacings(1.0, 1.0, 0.5, 1.0, 0.25, 0.0), ConfigError);
    CHECK_THROWS_AS(solve_edge_spacings(1.0, 1.0, -1.0, 1.0, 0.0, 0.0), ConfigError);
}

TEST_CASE("automatic tuning") {
    // Equal densities: the search should settle essentially on the symmetric
    // profile with a near-zero quality defect.
    const GradedMeshParams eq = auto_tune_mesh_params(5.0, 5.0, -1.0, 1.0);
    CHECK(std::abs(eq.dm_left / eq.dm_right - 1.0) < 1e-2);
    CHECK(eq.dm_left > 0.0);

    // Strong contrast stays feasible with the documented quality bound
    // q = |dm_left rho_right / (dm_right rho_left) - 1| <= 0.25.
    for (const double ratio : {2.0, 10.0, 1e3, 1e4}) {
        const GradedMeshParams p = auto_tune_mesh_params(1.0, ratio, -1.0, 1.0);
        CHECK(p.dm_left > 0.0);
        CHECK(p.dm_right > 0.0);
        CHECK(std::abs(p.dm_left * ratio / p.dm_right - 1.0) <= 0.25);
    }
    CHECK_THROWS_AS(auto_tune_mesh_params(-1.0, 1.0, -1.0, 1.0), ConfigError);
}

TEST_CASE("half-pair spacings partition the interval mass") {
    const GradedMeshParams params = auto_tune_mesh_params(1.0, 100.0, -0.5, 0.5);
    const double l_beta = params.beta * 0.5;
    const auto dm = half_pair_spacings(params, -0.5, 0.5, 40);
    REQUIRE(dm.size() == 40);
    double total = 0.0;
    for (const double d : dm) {
        CHECK(d > 0.0);
        total += d;
    }
    CHECK(total == doctest::Approx(interval_mass(params, l_beta, -0.5, 0.5)).epsilon(1e-12));
    // Even cell count puts an edge exactly at z = 0: the first half carries
    // exactly the left half-layer mass.
    double left = 0.0;
    for (std::size_t i = 0; i < 20; ++i)
        left += dm[i];
    CHECK(left == doctest::Approx(1.0 * 0.5).epsilon(1e-11));
}

TEST_CASE("layered mesh invariants") {
    const double rho1 = 20.0, rho2 = 10.0, width = 2.5;
    const std::size_t n_layers = 4, npp = 40;
    const Mesh mesh = build_layered_mesh(rho1, rho2, n_layers, width, npp);
    CHECK(mesh.size() == n_layers * npp);
    CHECK(mesh.total_mass() ==
          doctest::Approx((2.0 * rho1 + 2.0 * rho2) * width).epsilon(1e-12));
    for (const double d : mesh.dm)
        CHECK(d > 0.0);

    // Half-layer boundaries sit every npp/2 cells; each half-layer holds its
    // exact share of mass.
    const std::size_t nh = npp / 2;
    for (std::size_t j = 0; j < 2 * n_layers; ++j) {
        const double rho = (j / 2) % 2 == 0 ? rho1 : rho2;
        const double mass = mesh.m_edges[(j + 1) * nh] - mesh.m_edges[j * nh];
        CHECK(mass == doctest::Approx(rho * width / 2.0).epsilon(1e-11));
    }

    // Smooth grading: adjacent spacings never jump abruptly.
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i)
        CHECK(std::abs(mesh.dm[i + 1] / mesh.dm[i] - 1.0) < 0.5);

    CHECK_THROWS_AS(build_layered_mesh(1.0, 2.0, 1, 1.0, 20), ConfigError);
    CHECK_THROWS_AS(build_layered_mesh(1.0, 2.0, 4, 1.0, 8), ConfigError);
    CHECK_THROWS_AS(build_layered_mesh(1.0, 2.0, 4, 1.0, 21), ConfigError);
}

#ifndef SILAG_PROBLEMS_HPP
#define SILAG_PROBLEMS_HPP

#include "silag/implicit_step.hpp"
#include "silag/mesh.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace silag {

/// Piecewise-constant initial data over one x-interval with its material.
struct InitialRegion {
    double x_begin;
    double x_end;
    double rho;
    double u;
    double p;
    MaterialParams mat;
};

enum class MeshStrategy { UniformMass, UniformX, GradedInterface, GradedLayered };

struct ProblemSpec {
    std::string name;
    double x_left = 0.0;
    double x_right = 1.0;
    double t_end = 0.0;
    std::vector<InitialRegion> regions;
    // Optional smooth override of the regions' pressure, evaluated at cell
    // barycenters.
    std::function<double(double)> pressure_profile;
    MeshStrategy mesh_strategy = MeshStrategy::UniformMass;
    // Graded-layered parameters (stratified media).
    std::size_t n_layers = 0;
    double pulse_center = 0.0;
    double pulse_width = 0.0;
    double pulse_p0 = 1.0;
    // Recommended run settings.
    std::size_t default_n = 1000;
    double cfl = 1.0;
    int time_order = 2;
    bool ramp = false; // step-size ramp over the first steps (discontinuous ICs)
    SolverKnobs knobs;
};

/// Cosine pressure bump of the stratified tests: p0 (1 + 10 cos(2pi(x-x0)/ell))
/// strictly inside |x-x0| < ell/2, else p0; the bump support is additionally
/// clamped to where p > 0.01 p0 so ideal-gas layers stay positive.
double stratified_pressure_ic(double x, double x0, double ell, double p0);

const std::vector<ProblemSpec>& problem_registry();

/// Lookup by name; throws ConfigError for unknown names.
const ProblemSpec& find_problem(const std::string& name);

struct ProblemSetup {
    Mesh mesh;
    State state;
};

/// Build the mesh per the problem's strategy and sample the initial condition.
ProblemSetup instantiate(const ProblemSpec& spec, std::size_t n);

} // namespace silag

#endif

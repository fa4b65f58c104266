#ifndef SILAG_HARNESS_HPP
#define SILAG_HARNESS_HPP

#include "silag/norms.hpp"
#include "silag/problems.hpp"
#include "silag/timestepping.hpp"

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace silag {

/// Plot-ready per-cell snapshot.
struct SolutionRow {
    std::size_t i;
    double m_center;
    double x_center;
    double rho;
    double u_cell;
    double p;
    double E;
    int colour;
};

struct SolutionDump {
    std::vector<SolutionRow> rows;
};

SolutionDump make_solution_dump(const Mesh& mesh, const State& state);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Comma-separated dump with a '#'-prefixed metadata header; 17 significant
/// digits on all numeric fields.
void write_solution_csv(std::ostream& out, const SolutionDump& dump, const Metadata& meta);

struct ConvergenceEntry {
    std::size_t n;
    ErrorNorms norms;
};

struct ConvergenceResult {
    std::vector<ConvergenceEntry> entries;
    std::vector<double> orders_l1; // between successive grids
    std::size_t reference_n = 0;
};

struct StudyOptions {
    double cfl = 1.0;
    int time_order = 2;
    bool ramp = false;
    std::size_t reference_refine = 4; // explicit reference at refine * finest grid
    SolverKnobs knobs;
};

/// Error study against an explicit third-order reference run (CFL 0.8) on a
/// refined grid, restricted to coarse barycenters by piecewise-linear
/// interpolation in the mass coordinate. Norms act on specific total energy.
/// The reference must outresolve the finest study grid; the slope limiter in
/// the reconstruction degrades near smooth extrema, so an equal-grid
/// reference floors the finest-pair order.
ConvergenceResult convergence_study(const ProblemSpec& spec,
                                    const std::vector<std::size_t>& grids,
                                    const StudyOptions& options);

struct PerfEntry {
    std::size_t n;
    double cfl;
    long steps;
    long stages;
    double wall_seconds;
    double tdu; // wall seconds per cell per implicit stage
};

std::vector<PerfEntry> performance_study(const ProblemSpec& spec,
                                         const std::vector<std::size_t>& grids,
                                         const std::vector<double>& cfl_values,
                                         const StudyOptions& options);

/// Plain-text `key = value` configuration files; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Concurrency cap for studies: SILAG_THREADS if set, else the hardware count.
unsigned study_thread_cap();

} // namespace silag

#endif

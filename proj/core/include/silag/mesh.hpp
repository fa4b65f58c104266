#ifndef SILAG_MESH_HPP
#define SILAG_MESH_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace silag {

/// Staggered Lagrangian grid in mass coordinates. Cell i occupies
/// [m_edges[i], m_edges[i+1]] with mass width dm[i]; the face-based dual grid
/// spacing dm_dual[i] = (dm[i] + dm[i+1])/2 belongs to the interior edge
/// between cells i and i+1.
struct Mesh {
    std::vector<double> dm;      // N cell mass widths
    std::vector<double> m_edges; // N+1 cumulative edge coordinates, m_edges[0] = 0
    std::vector<double> dm_dual; // N-1 interior dual spacings
    double x_left = 0.0;

    std::size_t size() const { return dm.size(); }
    double total_mass() const { return m_edges.back(); }
    double m_center(std::size_t i) const { return 0.5 * (m_edges[i] + m_edges[i + 1]); }

    // Dual spacing at the left/right edge of cell i with the one-sided
    // convention dm_{1/2} = dm_1 and dm_{N+1/2} = dm_N.
    double dual_left(std::size_t i) const { return i == 0 ? dm[0] : dm_dual[i - 1]; }
    double dual_right(std::size_t i) const { return i + 1 == dm.size() ? dm.back() : dm_dual[i]; }
};

/// Assemble a mesh from cell mass widths; validates positivity.
Mesh make_mesh(std::vector<double> dm, double x_left = 0.0);

/// Uniform spacing in the mass coordinate.
Mesh build_uniform_mass_mesh(double total_mass, std::size_t n, double x_left = 0.0);

/// One region of piecewise-constant density in Eulerian coordinates.
struct DensityRegion {
    double x_begin;
    double x_end;
    double rho;
};

/// Uniform spacing in the Eulerian coordinate: dm_i = rho(x_center_i) * dx.
/// Region boundaries must align with cell edges.
Mesh build_uniform_x_mesh(const std::vector<DensityRegion>& regions, double x_left,
                          double x_right, std::size_t n);

/// Per-region uniform mass spacing with cell counts proportional to region
/// mass, so region boundaries land exactly on cell edges.
Mesh build_region_mass_mesh(const std::vector<DensityRegion>& regions, std::size_t n);

/// Eulerian edge coordinates reconstructed from the specific volume field.
std::vector<double> eulerian_edges(const Mesh& mesh, const std::vector<double>& V);

/// Diagnostic dump: one line per cell with `i, dm, m_center, x_center_initial`.
std::string dump_mesh(const Mesh& mesh, const std::vector<double>& V);

} // namespace silag

#endif

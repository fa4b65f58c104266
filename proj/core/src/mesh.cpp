#include "silag/mesh.hpp"

#include "silag/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace silag {

Mesh make_mesh(std::vector<double> dm, double x_left) {
    const std::size_t n = dm.size();
    if (n == 0)
        throw ConfigError("make_mesh: empty cell list");
    for (std::size_t i = 0; i < n; ++i)
        if (!(dm[i] > 0.0))
            throw ConfigError("make_mesh: nonpositive cell mass at index " + std::to_string(i));
    Mesh mesh;
    mesh.dm = std::move(dm);
    mesh.x_left = x_left;
    mesh.m_edges.resize(n + 1);
    mesh.m_edges[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        mesh.m_edges[i + 1] = mesh.m_edges[i] + mesh.dm[i];
    mesh.dm_dual.resize(n >= 1 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        mesh.dm_dual[i] = 0.5 * (mesh.dm[i] + mesh.dm[i + 1]);
    return mesh;
}

Mesh build_uniform_mass_mesh(double total_mass, std::size_t n, double x_left) {
    if (n < 5)
        throw ConfigError("build_uniform_mass_mesh: need at least 5 cells for filter stencils, got " +
                          std::to_string(n));
    if (!(total_mass > 0.0))
        throw ConfigError("build_uniform_mass_mesh: total mass must be positive");
    return make_mesh(std::vector<double>(n, total_mass / static_cast<double>(n)), x_left);
}

namespace {

void validate_regions(const std::vector<DensityRegion>& regions, double x_left, double x_right) {
    if (regions.empty())
        throw ConfigError("density regions: empty region list");
    if (std::abs(regions.front().x_begin - x_left) > 1e-12 * (std::abs(x_left) + 1.0) ||
        std::abs(regions.back().x_end - x_right) > 1e-12 * (std::abs(x_right) + 1.0))
        throw ConfigError("density regions: regions do not span the requested domain");
    for (std::size_t r = 0; r < regions.size(); ++r) {
        if (!(regions[r].rho > 0.0))
            throw ConfigError("density regions: nonpositive density in region " + std::to_string(r));
        if (!(regions[r].x_end > regions[r].x_begin))
            throw ConfigError("density regions: empty or reversed region " + std::to_string(r));
        if (r > 0 && std::abs(regions[r].x_begin - regions[r - 1].x_end) >
                         1e-12 * (std::abs(regions[r].x_begin) + 1.0))
            throw ConfigError("density regions: gap between regions " + std::to_string(r - 1) +
                              " and " + std::to_string(r));
    }
}

} // namespace

Mesh build_uniform_x_mesh(const std::vector<DensityRegion>& regions, double x_left,
                          double x_right, std::size_t n) {
    validate_regions(regions, x_left, x_right);
    if (n < 5)
        throw ConfigError("build_uniform_x_mesh: need at least 5 cells");
    const double dx = (x_right - x_left) / static_cast<double>(n);
    // Region boundaries must land on cell edges so that no cell straddles a
    // density jump.
    for (std::size_t r = 0; r + 1 < regions.size(); ++r) {
        const double pos = (regions[r].x_end - x_left) / dx;
        if (std::abs(pos - std::round(pos)) > 1e-9)
            throw ConfigError("build_uniform_x_mesh: region boundary at x = " +
                              std::to_string(regions[r].x_end) + " does not align with a cell edge");
    }
    std::vector<double> dm(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xc = x_left + (static_cast<double>(i) + 0.5) * dx;
        double rho = regions.back().rho;
        for (const auto& reg : regions)
            if (xc >= reg.x_begin && xc < reg.x_end) {
                rho = reg.rho;
                break;
            }
        dm[i] = rho * dx;
    }
    return make_mesh(std::move(dm), x_left);
}

Mesh build_region_mass_mesh(const std::vector<DensityRegion>& regions, std::size_t n) {
    validate_regions(regions, regions.front().x_begin, regions.back().x_end);
    if (n < 5)
        throw ConfigError("build_region_mass_mesh: need at least 5 cells");
    const std::size_t nr = regions.size();
    std::vector<double> masses(nr);
    double mass_total = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
        masses[r] = regions[r].rho * (regions[r].x_end - regions[r].x_begin);
        mass_total += masses[r];
    }
    // Distribute cells proportionally to region mass, at least one per region,
    // fixing the rounding residue on the heaviest region.
    std::vector<std::size_t> counts(nr);
    std::size_t assigned = 0;
    for (std::size_t r = 0; r < nr; ++r) {
        counts[r] = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * masses[r] / mass_total)));
        assigned += counts[r];
    }
    while (assigned != n) {
        const std::size_t heaviest =
            static_cast<std::size_t>(std::max_element(masses.begin(), masses.end()) - masses.begin());
        if (assigned < n) {
            ++counts[heaviest];
            ++assigned;
        } else if (counts[heaviest] > 1) {
            --counts[heaviest];
            --assigned;
        } else {
            throw ConfigError("build_region_mass_mesh: cannot balance cell counts");
        }
    }
    std::vector<double> dm;
    dm.reserve(n);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t i = 0; i < counts[r]; ++i)
            dm.push_back(masses[r] / static_cast<double>(counts[r]));
    return make_mesh(std::move(dm), regions.front().x_begin);
}

std::vector<double> eulerian_edges(const Mesh& mesh, const std::vector<double>& V) {
    const std::size_t n = mesh.size();
    std::vector<double> x(n + 1);
    x[0] = mesh.x_left;
    for (std::size_t i = 0; i < n; ++i)
        x[i + 1] = x[i] + mesh.dm[i] * V[i];
    return x;
}

std::string dump_mesh(const Mesh& mesh, const std::vector<double>& V) {
    const auto x = eulerian_edges(mesh, V);
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < mesh.size(); ++i)
        out << i << ", " << mesh.dm[i] << ", " << mesh.m_center(i) << ", "
            << 0.5 * (x[i] + x[i + 1]) << "\n";
    return out.str();
}

} // namespace silag

#include "silag/problems.hpp"

#include "silag/errors.hpp"
#include "silag/graded_mesh.hpp"

#include <algorithm>
#include <cmath>

namespace silag {

double stratified_pressure_ic(double x, double x0, double ell, double p0) {
    if (!(ell > 0.0))
        throw ConfigError("stratified_pressure_ic: ell must be positive");
    if (std::abs(x - x0) < ell / 2.0) {
        const double p = p0 * (1.0 + 10.0 * std::cos(2.0 * M_PI * (x - x0) / ell));
        if (p > 0.01 * p0)
            return p;
    }
    return p0;
}

namespace {

ProblemSpec riemann_problem(std::string name, double x_l, double x_d, double x_r, double t_end,
                            InitialRegion left, InitialRegion right, double cfl,
                            MeshStrategy strategy = MeshStrategy::UniformMass) {
    left.x_begin = x_l;
    left.x_end = x_d;
    right.x_begin = x_d;
    right.x_end = x_r;
    ProblemSpec spec;
    spec.name = std::move(name);
    spec.x_left = x_l;
    spec.x_right = x_r;
    spec.t_end = t_end;
    spec.regions = {left, right};
    spec.mesh_strategy = strategy;
    spec.cfl = cfl;
    spec.ramp = true; // discontinuous initial data: ease the first steps in
    // The plain pressure-jump diffusion keeps post-shock wakes clean at large
    // step sizes; the reconstructed variant is for smooth accuracy studies.
    spec.knobs.energy_diffusion_order = 1;
    return spec;
}

std::vector<ProblemSpec> build_registry() {
    const MaterialParams ideal{1.4, 0.0, 0};
    std::vector<ProblemSpec> reg;

    reg.push_back(riemann_problem("sod", 0.0, 0.5, 1.0, 0.25,
                                  {0, 0, 1.0, 0.0, 1.0, ideal},
                                  {0, 0, 0.125, 0.0, 0.1, ideal}, 1.0));
    reg.push_back(riemann_problem("lax", 0.0, 0.5, 1.0, 0.1,
                                  {0, 0, 0.445, 0.698, 3.528, ideal},
                                  {0, 0, 0.5, 0.0, 0.571, ideal}, 2.0));
    reg.push_back(riemann_problem("toro1", 0.0, 0.4, 1.0, 0.2,
                                  {0, 0, 1.0, 0.75, 1.0, ideal},
                                  {0, 0, 0.125, 0.0, 0.1, ideal}, 4.0));
    reg.push_back(riemann_problem("toro2", 0.0, 0.5, 1.0, 0.15,
                                  {0, 0, 1.0, -2.0, 0.4, ideal},
                                  {0, 0, 1.0, 2.0, 0.4, ideal}, 2.0));
    reg.push_back(riemann_problem("toro3", 0.0, 0.5, 1.0, 0.012,
                                  {0, 0, 1.0, 0.0, 1000.0, ideal},
                                  {0, 0, 1.0, 0.0, 0.01, ideal}, 2.0));
    reg.push_back(riemann_problem("toro4", -0.2, 0.5, 1.2, 0.035,
                                  {0, 0, 5.99924, 19.5975, 460.894, ideal},
                                  {0, 0, 5.99242, -6.19633, 46.095, ideal}, 1.5));
    reg.push_back(riemann_problem("toro5", 0.0, 0.6, 1.0, 0.012,
                                  {0, 0, 1.0, -19.59745, 1000.0, ideal},
                                  {0, 0, 1.0, -19.59745, 0.01, ideal}, 2.5));
    reg.push_back(riemann_problem("toro6", -2.1, 0.0, 2.1, 0.8,
                                  {0, 0, 1.0, 2.0, 0.1, ideal},
                                  {0, 0, 1.0, -2.0, 0.1, ideal}, 3.0));
    // The strong-shock tubes run in single-pass (wave-predictor) mode: near
    // the blast-wave fronts the reconciled coupling keeps tripping the step
    // retry ladder, inflating the step count by an order of magnitude for no
    // visible gain in the profiles.
    for (std::size_t i = reg.size() - 6; i < reg.size(); ++i)
        reg[i].knobs.outer_reconcile = false;

    // Variants with the aggressive volume-diffusion pass switched on.
    {
        ProblemSpec v = reg[reg.size() - 3]; // toro4
        v.name = "toro4_xd";
        v.knobs.extra_diffusion = true;
        reg.push_back(v);
        ProblemSpec w = reg[reg.size() - 2]; // toro6
        w.name = "toro6_xd";
        w.knobs.extra_diffusion = true;
        reg.push_back(w);
    }

    // The two-material tubes keep the reconstructed energy diffusion: at the
    // material interface the plain pressure jumps over-diffuse the contact.
    // They also run in single-pass (wave-predictor) mode: across the large
    // impedance jumps the reconciled coupling chases the interface pressure
    // transients and can lose positivity, while in predictor mode the spike
    // blend absorbs them.
    const auto two_material = [&reg](ProblemSpec spec) {
        spec.knobs.energy_diffusion_order = 2;
        spec.knobs.outer_reconcile = false;
        reg.push_back(std::move(spec));
    };
    two_material(riemann_problem("ak1", 0.0, 0.5, 1.0, 0.25,
                                  {0, 0, 1.0, 0.0, 1.0, MaterialParams{1.6, 0.0, 0}},
                                  {0, 0, 0.125, 0.0, 0.1, MaterialParams{1.2, 0.0, 1}}, 10.0));
    two_material(riemann_problem("ak2", 0.0, 0.5, 1.0, 0.015,
                                 {0, 0, 1.0, 0.0, 500.0, MaterialParams{1.4, 0.0, 0}},
                                 {0, 0, 1.0, 0.0, 0.2, MaterialParams{1.6, 0.0, 1}}, 2.0));
    two_material(riemann_problem("ak3", 0.0, 0.5, 1.0, 1.5e-4,
                                 {0, 0, 1000.0, 0.0, 1e9, MaterialParams{4.4, 6e8, 0}},
                                 {0, 0, 50.0, 0.0, 1e5, MaterialParams{1.4, 0.0, 1}}, 4.0,
                                 MeshStrategy::GradedInterface));

    {
        ProblemSpec smooth;
        smooth.name = "smooth";
        smooth.x_left = 0.0;
        smooth.x_right = 1.0;
        smooth.t_end = 0.2;
        smooth.regions = {
            {0.0, 1.0, 2.0, 0.0, 0.1, MaterialParams{1.4, 0.5, 0}}};
        smooth.pressure_profile = [](double x) {
            const double s = (x - 0.5) / 0.075;
            return 0.1 * (1.0 + 10.0 * std::exp(-s * s));
        };
        smooth.cfl = 1.0;
        reg.push_back(std::move(smooth));
    }

    {
        const MaterialParams air{1.4, 0.0, 0};
        const MaterialParams helium{1.67, 0.0, 1};
        ProblemSpec bubble;
        bubble.name = "bubble";
        bubble.x_left = 0.0;
        bubble.x_right = 1.0;
        bubble.t_end = 0.35;
        bubble.regions = {{0.0, 0.25, 1.3765, 0.2948, 1.57, air},
                          {0.25, 0.4, 1.0, 0.0, 1.0, air},
                          {0.4, 0.6, 0.138, 0.0, 1.0, helium},
                          {0.6, 1.0, 1.0, 0.0, 1.0, air}};
        bubble.mesh_strategy = MeshStrategy::UniformX;
        bubble.default_n = 2000;
        bubble.cfl = 5.0;
        bubble.time_order = 3;
        bubble.ramp = true;
        reg.push_back(std::move(bubble));
    }

    const auto stratified = [](std::string name, double rho1, double pi1, std::size_t n_layers,
                               double t_end) {
        ProblemSpec spec;
        spec.name = std::move(name);
        spec.x_left = 0.0;
        spec.x_right = 50.0;
        spec.t_end = t_end;
        spec.mesh_strategy = MeshStrategy::GradedLayered;
        spec.n_layers = n_layers;
        const double layer_width = 50.0 / static_cast<double>(n_layers);
        // Regions double as the per-layer material table (layer parity picks
        // the entry); geometry fields are derived from n_layers at build time.
        spec.regions = {{0.0, layer_width, rho1, 0.0, 1.0, MaterialParams{4.4, pi1, 1}},
                        {layer_width, 2.0 * layer_width, 10.0, 0.0, 1.0,
                         MaterialParams{1.4, 0.0, 0}}};
        spec.pulse_center = 25.0;
        spec.pulse_width = 2.5;
        spec.pulse_p0 = 1.0;
        spec.default_n = 2000;
        spec.cfl = 10.0;
        return spec;
    };
    reg.push_back(stratified("sm1", 20.0, 100.0, 20, 2.0));
    reg.push_back(stratified("sm2", 1e4, 100.0, 20, 2.5));
    reg.push_back(stratified("sm3", 1e4, 1e8, 20, 1.0));
    reg.push_back(stratified("sm4", 20.0, 1e4, 200, 2.0));

    return reg;
}

ProblemSetup instantiate_layered(const ProblemSpec& spec, std::size_t n) {
    if (spec.n_layers == 0 || n % spec.n_layers != 0)
        throw ConfigError("instantiate: cell count must be a multiple of the layer count");
    const std::size_t n_per_pair = n / spec.n_layers;
    const double layer_width = (spec.x_right - spec.x_left) / static_cast<double>(spec.n_layers);
    const double rho1 = spec.regions[0].rho;
    const double rho2 = spec.regions[1].rho;
    Mesh mesh = build_layered_mesh(rho1, rho2, spec.n_layers, layer_width, n_per_pair,
                                   spec.x_left);

    // Per-cell layer assignment by cumulative layer mass.
    std::vector<double> layer_mass_edges(spec.n_layers + 1, 0.0);
    for (std::size_t j = 0; j < spec.n_layers; ++j) {
        const double rho = j % 2 == 0 ? rho1 : rho2;
        layer_mass_edges[j + 1] = layer_mass_edges[j] + rho * layer_width;
    }

    const std::size_t n_cells = mesh.size();
    State state;
    state.V.resize(n_cells);
    state.E.resize(n_cells);
    state.u.assign(n_cells + 1, 0.0);
    state.mats.reserve(n_cells);
    state.p_cache.resize(n_cells);

    std::size_t layer = 0;
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double mc = mesh.m_center(i);
        while (layer + 1 < spec.n_layers && mc >= layer_mass_edges[layer + 1])
            ++layer;
        state.V[i] = 1.0 / (layer % 2 == 0 ? rho1 : rho2);
        state.mats.push_back(spec.regions[layer % 2].mat);
    }
    const auto x_edges = eulerian_edges(mesh, state.V);
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double xc = 0.5 * (x_edges[i] + x_edges[i + 1]);
        const double p = stratified_pressure_ic(xc, spec.pulse_center, spec.pulse_width,
                                                spec.pulse_p0);
        state.p_cache[i] = p;
        state.E[i] = internal_energy(state.V[i], p, state.mats[i]);
    }
    return {std::move(mesh), std::move(state)};
}

} // namespace

const std::vector<ProblemSpec>& problem_registry() {
    static const std::vector<ProblemSpec> registry = build_registry();
    return registry;
}

const ProblemSpec& find_problem(const std::string& name) {
    for (const ProblemSpec& spec : problem_registry())
        if (spec.name == name)
            return spec;
    throw ConfigError("unknown problem: " + name);
}

ProblemSetup instantiate(const ProblemSpec& spec, std::size_t n) {
    if (spec.mesh_strategy == MeshStrategy::GradedLayered)
        return instantiate_layered(spec, n);

    std::vector<DensityRegion> density;
    density.reserve(spec.regions.size());
    for (const InitialRegion& r : spec.regions)
        density.push_back({r.x_begin, r.x_end, r.rho});

    Mesh mesh = [&] {
        switch (spec.mesh_strategy) {
        case MeshStrategy::UniformX:
            return build_uniform_x_mesh(density, spec.x_left, spec.x_right, n);
        case MeshStrategy::GradedInterface: {
            // Quasi-uniform in x with a smoothly graded mass transition across
            // the single interface, built as one tuned half-layer pair.
            if (spec.regions.size() != 2)
                throw ConfigError("instantiate: graded interface needs exactly two regions");
            if (n % 2 != 0)
                throw ConfigError("instantiate: graded interface needs an even cell count");
            const double x_d = spec.regions[0].x_end;
            const double z_l = spec.x_left - x_d;
            const double z_r = spec.x_right - x_d;
            const auto params =
                auto_tune_mesh_params(spec.regions[0].rho, spec.regions[1].rho, z_l, z_r);
            return make_mesh(half_pair_spacings(params, z_l, z_r, n), spec.x_left);
        }
        default:
            return build_region_mass_mesh(density, n);
        }
    }();
    mesh.x_left = spec.x_left;

    // Assign cells to regions through the cumulative region masses, so
    // discontinuities stay on the edges the mesh builders placed them on.
    std::vector<double> region_mass_edges(spec.regions.size() + 1, 0.0);
    for (std::size_t r = 0; r < spec.regions.size(); ++r)
        region_mass_edges[r + 1] =
            region_mass_edges[r] +
            spec.regions[r].rho * (spec.regions[r].x_end - spec.regions[r].x_begin);

    const std::size_t n_cells = mesh.size();
    State state;
    state.V.resize(n_cells);
    state.E.resize(n_cells);
    state.u.resize(n_cells + 1);
    state.mats.reserve(n_cells);
    state.p_cache.resize(n_cells);

    std::vector<double> u_cell(n_cells);
    std::size_t region = 0;
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double mc = mesh.m_center(i);
        while (region + 1 < spec.regions.size() && mc >= region_mass_edges[region + 1])
            ++region;
        const InitialRegion& r = spec.regions[region];
        state.V[i] = 1.0 / r.rho;
        u_cell[i] = r.u;
        state.p_cache[i] = r.p;
        state.mats.push_back(r.mat);
    }
    if (spec.pressure_profile) {
        const auto x_edges = eulerian_edges(mesh, state.V);
        for (std::size_t i = 0; i < n_cells; ++i)
            state.p_cache[i] = spec.pressure_profile(0.5 * (x_edges[i] + x_edges[i + 1]));
    }
    for (std::size_t i = 0; i < n_cells; ++i) {
        if (!(state.p_cache[i] + state.mats[i].pi > 0.0))
            throw ConfigError("instantiate: initial pressure violates positivity");
        state.E[i] = internal_energy(state.V[i], state.p_cache[i], state.mats[i]) +
                     0.5 * u_cell[i] * u_cell[i];
    }
    // Edge velocities: region value inside a region, the average of the two
    // adjacent cell values on a discontinuity edge.
    state.u[0] = u_cell.front();
    state.u[n_cells] = u_cell.back();
    for (std::size_t j = 1; j < n_cells; ++j)
        state.u[j] = 0.5 * (u_cell[j - 1] + u_cell[j]);

    return {std::move(mesh), std::move(state)};
}

} // namespace silag

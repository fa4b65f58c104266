#include "silag/harness.hpp"

#include "silag/errors.hpp"
#include "silag/explicit_scheme.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

namespace silag {

SolutionDump make_solution_dump(const Mesh& mesh, const State& state) {
    const std::size_t n = mesh.size();
    const auto u_cell = interpolate_cell_velocity(state.u, mesh);
    const auto x_edges = eulerian_edges(mesh, state.V);
    SolutionDump dump;
    dump.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        dump.rows.push_back({i, mesh.m_center(i), 0.5 * (x_edges[i] + x_edges[i + 1]),
                             1.0 / state.V[i], u_cell[i],
                             pressure_from_conserved(state.V[i], state.E[i], u_cell[i],
                                                     state.mats[i]),
                             state.E[i], state.mats[i].colour});
    }
    return dump;
}

void write_solution_csv(std::ostream& out, const SolutionDump& dump, const Metadata& meta) {
    out << std::setprecision(17);
    for (const auto& [key, value] : meta)
        out << "# " << key << " = " << value << "\n";
    out << "i,m_center,x_center,rho,u,p,E,colour\n";
    for (const SolutionRow& r : dump.rows)
        out << r.i << ',' << r.m_center << ',' << r.x_center << ',' << r.rho << ',' << r.u_cell
            << ',' << r.p << ',' << r.E << ',' << r.colour << "\n";
}

namespace {

// Piecewise-linear evaluation of (xs, ys) at x, clamped at the ends.
double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front())
        return ys.front();
    if (x >= xs.back())
        return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - t) * ys[lo] + t * ys[hi];
}

struct ImplicitRunOutput {
    Mesh mesh;
    State state;
    RunResult result;
};

ImplicitRunOutput run_implicit_case(const ProblemSpec& spec, std::size_t n,
                                    const StudyOptions& options) {
    ProblemSetup setup = instantiate(spec, n);
    RunConfig config;
    config.t_end = spec.t_end;
    config.cfl = options.cfl;
    config.time_order = options.time_order;
    config.ramp = options.ramp;
    config.knobs = options.knobs;
    RunResult result = run_to_time(std::move(setup.state), setup.mesh, config);
    State state = std::move(result.state);
    return {std::move(setup.mesh), std::move(state), std::move(result)};
}

} // namespace

ConvergenceResult convergence_study(const ProblemSpec& spec,
                                    const std::vector<std::size_t>& grids,
                                    const StudyOptions& options) {
    if (grids.empty() || !std::is_sorted(grids.begin(), grids.end()))
        throw ConfigError("convergence_study: grids must be nonempty and increasing");

    // Reference: refined explicit third-order run at CFL 0.8.
    const std::size_t n_ref = grids.back() * std::max<std::size_t>(1, options.reference_refine);
    auto reference_future = std::async(std::launch::async, [&] {
        ProblemSetup setup = instantiate(spec, n_ref);
        refresh_pressure(setup.state, setup.mesh);
        ExplicitState collocated = collocate_state(setup.state, setup.mesh);
        ExplicitRunResult res =
            run_explicit(std::move(collocated), setup.mesh, spec.t_end, 0.8, 3,
                         spec.knobs.boundary);
        std::vector<double> m_centers(setup.mesh.size());
        for (std::size_t i = 0; i < setup.mesh.size(); ++i)
            m_centers[i] = setup.mesh.m_center(i);
        return std::make_pair(std::move(m_centers), std::move(res.state.E));
    });

    const unsigned cap = std::max(1u, study_thread_cap());
    std::vector<std::future<ImplicitRunOutput>> futures(grids.size());
    std::vector<ImplicitRunOutput> outputs(grids.size());
    for (std::size_t start = 0; start < grids.size(); start += cap) {
        const std::size_t stop = std::min(grids.size(), start + cap);
        for (std::size_t g = start; g < stop; ++g)
            futures[g] = std::async(std::launch::async,
                                    [&, g] { return run_implicit_case(spec, grids[g], options); });
        for (std::size_t g = start; g < stop; ++g)
            outputs[g] = futures[g].get();
    }
    const auto [ref_m, ref_e] = reference_future.get();

    ConvergenceResult result;
    result.reference_n = n_ref;
    std::vector<double> l1_errors;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        const Mesh& mesh = outputs[g].mesh;
        std::vector<double> error(mesh.size());
        for (std::size_t i = 0; i < mesh.size(); ++i)
            error[i] = outputs[g].state.E[i] - interp_linear(ref_m, ref_e, mesh.m_center(i));
        const ErrorNorms norms = error_norms(mesh.dm, error);
        result.entries.push_back({grids[g], norms});
        l1_errors.push_back(norms.l1);
    }
    result.orders_l1 = observed_orders(grids, l1_errors);
    return result;
}

std::vector<PerfEntry> performance_study(const ProblemSpec& spec,
                                         const std::vector<std::size_t>& grids,
                                         const std::vector<double>& cfl_values,
                                         const StudyOptions& options) {
    std::vector<PerfEntry> table;
    for (const std::size_t n : grids) {
        for (const double cfl : cfl_values) {
            StudyOptions opts = options;
            opts.cfl = cfl;
            const ImplicitRunOutput out = run_implicit_case(spec, n, opts);
            const double denom =
                static_cast<double>(n) * static_cast<double>(std::max<long>(1, out.result.stages));
            table.push_back({n, cfl, out.result.steps, out.result.stages,
                             out.result.wall_seconds, out.result.wall_seconds / denom});
        }
    }
    return table;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("parse_config_file: cannot open " + path);
    std::map<std::string, std::string> config;
    std::string line;
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("parse_config_file: missing '=' at " + path + ":" +
                              std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("parse_config_file: empty key at " + path + ":" +
                              std::to_string(line_no));
        config[key] = value;
    }
    return config;
}

unsigned study_thread_cap() {
    if (const char* env = std::getenv("SILAG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

} // namespace silag

#include "silag/errors.hpp"
#include "silag/exact_riemann.hpp"
#include "silag/graded_mesh.hpp"
#include "silag/harness.hpp"
#include "silag/problems.hpp"
#include "silag/timestepping.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kBuildId = "silag-0.1.0";

int integrator_order(const std::string& name) {
    if (name == "euler" || name == "1")
        return 1;
    if (name == "sdirk2" || name == "2")
        return 2;
    if (name == "sdirk3" || name == "3")
        return 3;
    throw silag::ConfigError("unknown integrator: " + name);
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
    if (path.empty() || path == "-")
        return nullptr; // caller falls back to std::cout
    auto out = std::make_unique<std::ofstream>(path);
    if (!*out)
        throw silag::ConfigError("cannot open output file: " + path);
    return out;
}

struct CommonOptions {
    std::string problem = "sod";
    std::size_t n = 0;
    double cfl = -1.0;
    std::string integrator;
    int energy_order = -1;
    bool extra_diffusion = false;
    bool no_pressure_filter = false;
    bool ramp = false;
    bool no_ramp = false;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--problem", opt.problem, "registered problem name");
    cmd->add_option("--n", opt.n, "number of cells (0: problem default)");
    cmd->add_option("--cfl", opt.cfl, "acoustic CFL multiplier (<0: problem default)");
    cmd->add_option("--integrator", opt.integrator, "euler | sdirk2 | sdirk3");
    cmd->add_option("--energy-order", opt.energy_order, "energy diffusion order (1 or 2)");
    cmd->add_flag("--extra-diffusion", opt.extra_diffusion, "enable the extra volume pass");
    cmd->add_flag("--no-pressure-filter", opt.no_pressure_filter, "disable the pressure blend");
    cmd->add_flag("--ramp", opt.ramp, "force the CFL startup ramp on");
    cmd->add_flag("--no-ramp", opt.no_ramp, "force the CFL startup ramp off");
    cmd->add_option("--out", opt.out, "output file (default: stdout)");
}

void resolve_defaults(const silag::ProblemSpec& spec, CommonOptions& opt,
                      silag::StudyOptions& study) {
    study.cfl = opt.cfl < 0.0 ? spec.cfl : opt.cfl;
    study.time_order = opt.integrator.empty() ? spec.time_order : integrator_order(opt.integrator);
    study.knobs = spec.knobs;
    if (opt.energy_order > 0)
        study.knobs.energy_diffusion_order = opt.energy_order;
    if (opt.extra_diffusion)
        study.knobs.extra_diffusion = true;
    if (opt.no_pressure_filter)
        study.knobs.pressure_filter = false;
    study.ramp = opt.ramp || (spec.ramp && !opt.no_ramp);
    if (opt.n == 0)
        opt.n = spec.default_n;
}

int cmd_run(const CommonOptions& opt_in) {
    CommonOptions opt = opt_in;
    const silag::ProblemSpec& spec = silag::find_problem(opt.problem);
    silag::StudyOptions study;
    resolve_defaults(spec, opt, study);

    silag::ProblemSetup setup = silag::instantiate(spec, opt.n);
    silag::RunConfig config;
    config.t_end = spec.t_end;
    config.cfl = study.cfl;
    config.time_order = study.time_order;
    config.knobs = study.knobs;
    config.ramp = study.ramp;
    silag::RunResult result = silag::run_to_time(std::move(setup.state), setup.mesh, config);

    const silag::SolutionDump dump = silag::make_solution_dump(setup.mesh, result.state);
    const silag::Metadata meta = {{"build", kBuildId},
                                  {"problem", spec.name},
                                  {"n", std::to_string(opt.n)},
                                  {"cfl", std::to_string(study.cfl)},
                                  {"integrator", std::to_string(study.time_order)},
                                  {"t", std::to_string(result.t)},
                                  {"steps", std::to_string(result.steps)}};
    auto file = open_output(opt.out);
    silag::write_solution_csv(file ? *file : std::cout, dump, meta);
    return 0;
}

std::vector<std::size_t> parse_grids(const std::string& csv) {
    std::vector<std::size_t> grids;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        grids.push_back(static_cast<std::size_t>(std::stoull(item)));
    if (grids.empty())
        throw silag::ConfigError("empty grid list");
    return grids;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        values.push_back(std::stod(item));
    if (values.empty())
        throw silag::ConfigError("empty value list");
    return values;
}

int cmd_converge(const CommonOptions& opt_in, const std::string& grids_csv) {
    CommonOptions opt = opt_in;
    const silag::ProblemSpec& spec = silag::find_problem(opt.problem);
    silag::StudyOptions study;
    resolve_defaults(spec, opt, study);

    const auto grids = parse_grids(grids_csv);
    const silag::ConvergenceResult result = silag::convergence_study(spec, grids, study);

    auto file = open_output(opt.out);
    std::ostream& out = file ? *file : std::cout;
    out << std::setprecision(17);
    out << "# build = " << kBuildId << "\n# problem = " << spec.name
        << "\n# cfl = " << study.cfl << "\n# integrator = " << study.time_order
        << "\n# reference_n = " << result.reference_n << "\n";
    out << "n,l1,l2,linf,order_l1\n";
    for (std::size_t g = 0; g < result.entries.size(); ++g) {
        const auto& e = result.entries[g];
        out << e.n << ',' << e.norms.l1 << ',' << e.norms.l2 << ',' << e.norms.linf << ',';
        if (g == 0)
            out << "nan";
        else
            out << result.orders_l1[g - 1];
        out << "\n";
    }
    return 0;
}

int cmd_perf(const CommonOptions& opt_in, const std::string& grids_csv,
             const std::string& cfls_csv) {
    CommonOptions opt = opt_in;
    const silag::ProblemSpec& spec = silag::find_problem(opt.problem);
    silag::StudyOptions study;
    resolve_defaults(spec, opt, study);

    const auto table =
        silag::performance_study(spec, parse_grids(grids_csv), parse_doubles(cfls_csv), study);
    auto file = open_output(opt.out);
    std::ostream& out = file ? *file : std::cout;
    out << std::setprecision(17);
    out << "# build = " << kBuildId << "\n# problem = " << spec.name << "\n";
    out << "n,cfl,steps,stages,wall_seconds,tdu\n";
    for (const auto& row : table)
        out << row.n << ',' << row.cfl << ',' << row.steps << ',' << row.stages << ','
            << row.wall_seconds << ',' << row.tdu << "\n";
    return 0;
}

int cmd_mesh(double rho1, double rho2, std::size_t layers, double layer_width, std::size_t n,
             const std::string& out_path) {
    const silag::Mesh mesh =
        silag::build_layered_mesh(rho1, rho2, layers, layer_width, n / layers);
    // Specific volume per layer for the x reconstruction in the dump.
    std::vector<double> v(mesh.size());
    std::size_t layer = 0;
    std::vector<double> layer_mass(layers + 1, 0.0);
    for (std::size_t j = 0; j < layers; ++j)
        layer_mass[j + 1] = layer_mass[j] + (j % 2 == 0 ? rho1 : rho2) * layer_width;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        while (layer + 1 < layers && mesh.m_center(i) >= layer_mass[layer + 1])
            ++layer;
        v[i] = 1.0 / (layer % 2 == 0 ? rho1 : rho2);
    }
    auto file = open_output(out_path);
    (file ? *file : std::cout) << silag::dump_mesh(mesh, v);
    return 0;
}

int cmd_exact(const std::string& problem, double t, std::size_t samples,
              const std::string& out_path) {
    const silag::ProblemSpec& spec = silag::find_problem(problem);
    if (spec.regions.size() != 2 || spec.pressure_profile)
        throw silag::ConfigError("exact: problem is not a two-state Riemann problem");
    const silag::InitialRegion& l = spec.regions[0];
    const silag::InitialRegion& r = spec.regions[1];
    const silag::RiemannSide left{l.rho, l.u, l.p, l.mat};
    const silag::RiemannSide right{r.rho, r.u, r.p, r.mat};
    const silag::StarState star = silag::solve_star(left, right);
    const double x_d = l.x_end;

    auto file = open_output(out_path);
    std::ostream& out = file ? *file : std::cout;
    out << std::setprecision(17);
    out << "# build = " << kBuildId << "\n# problem = " << spec.name << "\n# t = " << t
        << "\n# p_star = " << star.p_star << "\n# u_star = " << star.u_star << "\n";
    out << "x,rho,u,p\n";
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = spec.x_left + (spec.x_right - spec.x_left) *
                                           (static_cast<double>(i) + 0.5) /
                                           static_cast<double>(samples);
        const silag::Primitive prim =
            t > 0.0 ? silag::sample(left, right, star, (x - x_d) / t)
                    : (x < x_d ? silag::Primitive{l.rho, l.u, l.p}
                               : silag::Primitive{r.rho, r.u, r.p});
        out << x << ',' << prim.rho << ',' << prim.u << ',' << prim.p << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D implicit Lagrangian multimaterial flow solver"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file");

    CommonOptions run_opt, conv_opt, perf_opt;
    std::string conv_grids = "100,400,1600,6400";
    std::string perf_grids = "4096";
    std::string perf_cfls = "1";

    CLI::App* run_cmd = app.add_subcommand("run", "run one problem and dump the solution");
    add_common(run_cmd, run_opt);

    CLI::App* conv_cmd = app.add_subcommand("converge", "grid-convergence study");
    add_common(conv_cmd, conv_opt);
    conv_cmd->add_option("--grids", conv_grids, "comma-separated cell counts");

    CLI::App* perf_cmd = app.add_subcommand("perf", "time-per-DOF-per-stage study");
    add_common(perf_cmd, perf_opt);
    perf_cmd->add_option("--grids", perf_grids, "comma-separated cell counts");
    perf_cmd->add_option("--cfls", perf_cfls, "comma-separated CFL multipliers");

    double mesh_rho1 = 20.0, mesh_rho2 = 10.0, mesh_layer_width = 2.5;
    std::size_t mesh_layers = 20, mesh_n = 2000;
    std::string mesh_out;
    CLI::App* mesh_cmd = app.add_subcommand("mesh", "dump a graded layered mesh");
    mesh_cmd->add_option("--rho1", mesh_rho1, "density of odd layers");
    mesh_cmd->add_option("--rho2", mesh_rho2, "density of even layers");
    mesh_cmd->add_option("--layers", mesh_layers, "number of layers");
    mesh_cmd->add_option("--layer-width", mesh_layer_width, "layer width");
    mesh_cmd->add_option("--n", mesh_n, "total number of cells");
    mesh_cmd->add_option("--out", mesh_out, "output file (default: stdout)");

    std::string exact_problem = "sod", exact_out;
    double exact_t = -1.0;
    std::size_t exact_samples = 10000;
    CLI::App* exact_cmd = app.add_subcommand("exact", "dump a sampled exact Riemann solution");
    exact_cmd->add_option("--problem", exact_problem, "registered two-state problem");
    exact_cmd->add_option("--t", exact_t, "sample time (<0: problem t_end)");
    exact_cmd->add_option("--samples", exact_samples, "number of sample points");
    exact_cmd->add_option("--out", exact_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed())
            return cmd_run(run_opt);
        if (conv_cmd->parsed())
            return cmd_converge(conv_opt, conv_grids);
        if (perf_cmd->parsed())
            return cmd_perf(perf_opt, perf_grids, perf_cfls);
        if (mesh_cmd->parsed())
            return cmd_mesh(mesh_rho1, mesh_rho2, mesh_layers, mesh_layer_width, mesh_n, mesh_out);
        if (exact_cmd->parsed()) {
            const double t =
                exact_t < 0.0 ? silag::find_problem(exact_problem).t_end : exact_t;
            return cmd_exact(exact_problem, t, exact_samples, exact_out);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const silag::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    }
}

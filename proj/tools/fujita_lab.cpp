// fujita_lab: verify explicit supersolutions, run blow-up dichotomy sweeps,
// and evaluate capacity scaling certificates from a flat key=value config.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fujita/commands.hpp"

namespace {

constexpr const char* kSchemaHelp = R"(Config file: flat key=value lines, '#' comments. Keys:
  n                      spatial dimension (default 1)
  field.kind             power | constant | tabulated
  field.alpha            growth parameter alpha
  field.c                growth constant c (> 0); defaults to the minimal fit
  field.value            constant-field value (field.kind=constant)
  field.table            CSV path of (r,value) pairs (field.kind=tabulated)
  q                      nonlinearity exponent
  grid.rmax, grid.nodes  truncation radius and node count
  grid.stretch           uniform | geometric     grid.ratio  cell growth ratio
  tend                   time horizon
  init.kind              gaussian | constant | exact
  init.amplitude         peak value (gaussian/constant) or scale (exact)
  init.width             gaussian width
  init.gamma, init.kappa exact-profile parameters (defaults: box corner)
  bc                     dirichlet | neumann
  integrator             rk2 | imex
  dt.cfl, dt.max         step control
  blowup.threshold       max-norm threshold M (default 1e8)
  reaction.enabled       0 disables the source term
  frames                 solution snapshots kept per run
  sweep.q                comma list of exponents
  sweep.amplitudes       comma list of amplitudes
  exact.n, exact.alpha_hat, exact.q   comma lists for verify-exact
  exact.samples, exact.tmax, exact.rmax, exact.tolerance
  exact.gamma, exact.kappa            parameter overrides
  capacity.r_list        comma list of radii (>= 3)
  capacity.t_nodes, capacity.r_nodes  quadrature resolution

Output CSV schemas (all floats printed with 17 significant digits):
  verify-exact   t,r,u,residual
  sweep          q,amplitude,outcome,t_star,final_max,steps
  capacity-check R,J_time,J_space_d,J_space_qnu,lhs,rhs,ratio,slope_time,slope_space_d,slope_space_qnu
  envelope       R,envelope,bound,satisfied
  catalog.csv    timestamp,subcommand,config_hash,output,summary
)";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fujita_lab: semilinear parabolic blow-up laboratory"};
    app.footer(kSchemaHelp);

    std::string config_path;
    std::string out_dir = "out";
    int jobs = 1;
    std::uint64_t seed = 1;
    app.add_option("--config", config_path, "run-config file (key=value)")->required();
    app.add_option("--out", out_dir, "output directory (FUJITA_LAB_OUT overrides)");
    app.add_option("--jobs", jobs, "concurrent sweep cells")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "RNG seed for sampling subcommands");

    auto* verify = app.add_subcommand("verify-exact", "residual-verify the explicit solutions");
    auto* sweep = app.add_subcommand("sweep", "dichotomy sweep across q and amplitude");
    auto* capacity = app.add_subcommand("capacity-check", "capacity integral scaling check");
    auto* envelope = app.add_subcommand("envelope", "growth envelope check");
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("FUJITA_LAB_OUT")) out_dir = env;

    try {
        const fujita::RunConfig cfg = fujita::RunConfig::parse_file(config_path);
        const std::filesystem::path out{out_dir};
        if (verify->parsed()) return fujita::cmd_verify_exact(cfg, out, seed);
        if (sweep->parsed()) return fujita::cmd_sweep(cfg, out, jobs);
        if (capacity->parsed()) return fujita::cmd_capacity(cfg, out);
        if (envelope->parsed()) return fujita::cmd_envelope(cfg, out);
    } catch (const fujita::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

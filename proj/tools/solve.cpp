#include <cstdio>
#include <stdexcept>

#include "CLI11.hpp"
#include "nnflow/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stress-velocity-pressure solver for implicitly constituted flows"};
  app.require_subcommand(1);
  CLI::App* solve = app.add_subcommand("solve", "Run a case parameter sweep");

  std::string case_name, config_path, sweep_arg, out_dir;
  int k = -1, refs = -1;
  double gamma = -1.0;
  bool dump_blocks = false, jacobi_relax = false, fd_check = false;

  solve->add_option("--case", case_name, "bingham-channel | ldc-carreau | obstacle-euler")->required();
  solve->add_option("--config", config_path, "flat key=value config file")->required();
  solve->add_option("--k", k, "polynomial degree (2 or 3)");
  solve->add_option("--refs", refs, "number of mesh refinements");
  solve->add_option("--gamma", gamma, "augmented Lagrangian parameter");
  solve->add_option("--sweep", sweep_arg, "NAME=v1,v2,... sweep override");
  solve->add_option("--out", out_dir, "output directory (CSV report and VTK fields)");
  solve->add_flag("--dump-blocks", dump_blocks, "write Jacobian blocks in MatrixMarket format");
  solve->add_flag("--jacobi-relax", jacobi_relax, "pointwise Jacobi relaxation instead of macrostar patches");
  solve->add_flag("--fd-check", fd_check, "finite-difference Jacobian check before solving");

  CLI11_PARSE(app, argc, argv);

  try {
    nnflow::RunConfig cfg = nnflow::case_defaults(case_name);
    nnflow::load_config_file(cfg, config_path);
    cfg.case_name = case_name;
    if (k > 0) cfg.k = k;
    if (refs >= 0) cfg.refs = refs;
    if (gamma >= 0.0) cfg.gamma = gamma;
    if (!sweep_arg.empty()) {
      const auto eq = sweep_arg.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--sweep expects NAME=v1,v2,...");
      cfg.sweep = sweep_arg.substr(0, eq);
      cfg.schedule = nnflow::parse_schedule(sweep_arg.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.dump_blocks = dump_blocks;
    cfg.jacobi_relax = jacobi_relax;
    cfg.fd_check = fd_check;

    const nnflow::CaseReport rep = nnflow::run_case(cfg);
    return rep.all_converged() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

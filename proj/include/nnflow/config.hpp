#pragma once

#include <string>
#include <vector>

namespace nnflow {

// Run description. Config files are flat key=value text with these field
// names ("case" for case_name, "out" for out_dir); '#' starts a comment.
struct RunConfig {
  std::string case_name;
  int k = 2;
  int refs = 1;
  double gamma = 1e4;

  std::string model;
  double nu = 1.0;
  double tau_y = 0.0;
  double eps = 1.0;
  double r = 2.0;
  double r1 = 2.0, r2 = 2.0;
  double gamma1 = 1.0, gamma2 = 1.0;
  double beta1 = 1.0, beta2 = 1.0;

  std::string sweep;  // eps | nu | gamma2 | r
  std::vector<double> schedule;
  std::string continuation = "secant";  // secant | naive

  double newton_tol = 1e-8;
  double krylov_tol = 1e-10;
  int max_newton = 50;
  int max_krylov = 500;
  int cycles = 2;
  int sweeps = 5;
  bool stabilization = false;

  std::string out_dir;
  bool dump_blocks = false;
  bool jacobi_relax = false;
  bool fd_check = false;
};

// Built-in defaults per case (mesh, model, schedule, solver dials).
RunConfig case_defaults(const std::string& case_name);

std::vector<double> parse_schedule(const std::string& csv);

// One key=value assignment; throws on unknown keys or bad values.
void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value);

void load_config_file(RunConfig& cfg, const std::string& path);

}  // namespace nnflow

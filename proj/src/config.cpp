#include "nnflow/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nnflow {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  const int i = static_cast<int>(x);
  if (x != i) throw std::invalid_argument("config: expected integer for " + key);
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw std::invalid_argument("config: expected boolean for " + key);
}

}  // namespace

std::vector<double> parse_schedule(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("config: empty schedule entry");
    out.push_back(to_double("schedule", item));
  }
  if (out.empty()) throw std::invalid_argument("config: empty schedule");
  return out;
}

RunConfig case_defaults(const std::string& case_name) {
  RunConfig c;
  c.case_name = case_name;
  if (case_name == "bingham-channel") {
    c.model = "bingham-be";
    c.nu = 1.0;
    c.tau_y = std::sqrt(2.0);
    c.eps = 1.0;
    c.refs = 2;
    c.sweep = "eps";
    c.schedule = {1.0, 0.1, 0.01, 0.001, 0.0001};
    c.continuation = "secant";
    c.stabilization = false;
    c.sweeps = 5;
    // the continuation scheme for the yield-stress limit needs tighter solves
    c.newton_tol = 1e-10;
    c.krylov_tol = 1e-12;
  } else if (case_name == "ldc-carreau") {
    c.model = "carreau-yasuda";
    c.nu = 0.2;
    c.r1 = 1.8;
    c.r2 = 2.5;
    c.gamma1 = 200.0;
    c.gamma2 = 200.0;
    c.beta1 = 0.9;
    c.beta2 = 0.5;
    c.refs = 1;
    c.sweep = "nu";
    c.schedule = {0.2, 0.05, 0.01, 0.005, 0.002, 0.001};
    c.continuation = "naive";
    c.stabilization = true;
    c.sweeps = 4;
  } else if (case_name == "obstacle-euler") {
    c.model = "euler-power-law";
    c.nu = 0.5;
    c.r = 1.3;
    c.tau_y = 3.0;
    c.eps = 1.0;
    c.refs = 1;
    c.sweep = "eps";
    c.schedule = {1.0, 0.2, 0.01, 0.001, 0.0001, 0.00001};
    c.continuation = "secant";
    c.stabilization = true;
    c.sweeps = 3;
  } else {
    throw std::invalid_argument("unknown case: " + case_name);
  }
  return c;
}

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "case")
    cfg.case_name = value;
  else if (key == "k")
    cfg.k = to_int(key, value);
  else if (key == "refs")
    cfg.refs = to_int(key, value);
  else if (key == "gamma")
    cfg.gamma = to_double(key, value);
  else if (key == "model")
    cfg.model = value;
  else if (key == "nu")
    cfg.nu = to_double(key, value);
  else if (key == "tau_y")
    cfg.tau_y = to_double(key, value);
  else if (key == "eps")
    cfg.eps = to_double(key, value);
  else if (key == "r")
    cfg.r = to_double(key, value);
  else if (key == "r1")
    cfg.r1 = to_double(key, value);
  else if (key == "r2")
    cfg.r2 = to_double(key, value);
  else if (key == "gamma1")
    cfg.gamma1 = to_double(key, value);
  else if (key == "gamma2")
    cfg.gamma2 = to_double(key, value);
  else if (key == "beta1")
    cfg.beta1 = to_double(key, value);
  else if (key == "beta2")
    cfg.beta2 = to_double(key, value);
  else if (key == "sweep")
    cfg.sweep = value;
  else if (key == "schedule")
    cfg.schedule = parse_schedule(value);
  else if (key == "continuation") {
    if (value != "secant" && value != "naive")
      throw std::invalid_argument("config: continuation must be secant or naive");
    cfg.continuation = value;
  } else if (key == "newton_tol")
    cfg.newton_tol = to_double(key, value);
  else if (key == "krylov_tol")
    cfg.krylov_tol = to_double(key, value);
  else if (key == "max_newton")
    cfg.max_newton = to_int(key, value);
  else if (key == "max_krylov")
    cfg.max_krylov = to_int(key, value);
  else if (key == "cycles")
    cfg.cycles = to_int(key, value);
  else if (key == "sweeps")
    cfg.sweeps = to_int(key, value);
  else if (key == "stabilization")
    cfg.stabilization = to_bool(key, value);
  else if (key == "out")
    cfg.out_dir = value;
  else
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: " + path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_kv(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

}  // namespace nnflow

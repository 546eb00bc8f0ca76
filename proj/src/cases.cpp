#include "nnflow/cases.hpp"

#include <cmath>
#include <stdexcept>

namespace nnflow {

std::pair<Vec2, double> exact_bingham(const Vec2& x, double C, double tau_y, double L) {
  if (tau_y >= C) throw std::invalid_argument("exact_bingham: tau_y >= C leaves no flow");
  const double yc = tau_y / C;
  const double y = x[1];
  double u;
  if (y >= yc)
    u = 0.5 * C * (1.0 - y * y) - tau_y * (1.0 - y);
  else if (y >= -yc)
    u = 0.5 * C * (1.0 - yc * yc) - tau_y * (1.0 - yc);
  else
    u = 0.5 * C * (1.0 - y * y) - tau_y * (1.0 + y);
  return {Vec2(u, 0.0), -C * (x[0] - 0.5 * L)};
}

ConstitutiveModel make_model(const RunConfig& cfg) {
  if (cfg.model == "newtonian") return ConstitutiveModel::newtonian(cfg.nu);
  if (cfg.model == "carreau-yasuda")
    return ConstitutiveModel::carreau_yasuda(cfg.nu, cfg.r1, cfg.r2, cfg.beta1, cfg.beta2, cfg.gamma1,
                                             cfg.gamma2);
  if (cfg.model == "bingham-be") return ConstitutiveModel::bingham_be(cfg.nu, cfg.tau_y, cfg.eps);
  if (cfg.model == "bingham-papanastasiou")
    return ConstitutiveModel::bingham_papanastasiou(cfg.nu, cfg.tau_y, cfg.eps);
  if (cfg.model == "activated-euler") return ConstitutiveModel::activated_euler(cfg.nu, cfg.tau_y, cfg.eps);
  if (cfg.model == "euler-power-law")
    return ConstitutiveModel::euler_power_law(cfg.nu, cfg.r, cfg.tau_y, cfg.eps);
  throw std::invalid_argument("unknown model: " + cfg.model);
}

HierarchyProblem build_case(const RunConfig& cfg) {
  if (cfg.k < 2 || cfg.k > 3) throw std::invalid_argument("build_case: k must be 2 or 3");
  if (cfg.refs < 0) throw std::invalid_argument("build_case: refs < 0");

  HierarchyProblem hp;
  const ConstitutiveModel model = make_model(cfg);
  std::vector<VelocityBC> bcs;
  bool nullspace = false;

  Triangulation coarse;
  if (cfg.case_name == "bingham-channel") {
    coarse = rect_mesh(16, 8, 4.0, 2.0, -1.0);
    const auto dirichlet = [](const Vec2& x) { return exact_bingham(x, 2.0, 1.0, 4.0).first; };
    for (int m = 1; m <= 4; ++m) bcs.push_back({m, dirichlet, 3});
    nullspace = true;
  } else if (cfg.case_name == "ldc-carreau") {
    coarse = rect_mesh(8, 8, 2.0, 2.0, 0.0);
    const auto zero = [](const Vec2&) { return Vec2(0.0, 0.0); };
    const auto lid = [](const Vec2& x) {
      const double s = x[0] * (2.0 - x[0]);
      return Vec2(s * s, 0.0);
    };
    for (int m = 1; m <= 3; ++m) bcs.push_back({m, zero, 3});
    bcs.push_back({4, lid, 3});
    nullspace = true;
  } else if (cfg.case_name == "obstacle-euler") {
    coarse = channel_with_hole(1);
    const auto zero = [](const Vec2&) { return Vec2(0.0, 0.0); };
    const auto inflow = [](const Vec2& x) {
      return Vec2(4.0 * 0.3 * x[1] * (0.41 - x[1]) / (0.41 * 0.41), 0.0);
    };
    bcs.push_back({1, inflow, 3});
    bcs.push_back({2, zero, 2});  // outflow: tangential component only
    bcs.push_back({3, zero, 3});
    bcs.push_back({4, zero, 3});
    bcs.push_back({5, zero, 3});
    nullspace = false;
  } else {
    throw std::invalid_argument("unknown case: " + cfg.case_name);
  }

  hp.h = build_hierarchy(coarse, cfg.refs + 1);
  hp.levels.reserve(hp.h.n_levels());
  for (int l = 0; l < hp.h.n_levels(); ++l)
    hp.levels.push_back(
        make_problem(hp.h.levels[l], cfg.k, model, cfg.gamma, bcs, {}, cfg.stabilization, nullspace));
  return hp;
}

void set_sweep_value(HierarchyProblem& hp, const std::string& param, double value) {
  for (auto& prob : hp.levels) {
    if (param == "eps")
      prob.model.set_eps(value);
    else if (param == "nu")
      prob.model.set_nu(value);
    else if (param == "gamma2")
      prob.model.set_gamma2(value);
    else if (param == "r")
      prob.model.set_r(value);
    else
      throw std::invalid_argument("unknown sweep parameter: " + param);
  }
}

}  // namespace nnflow

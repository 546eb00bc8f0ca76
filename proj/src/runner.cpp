#include "nnflow/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "nnflow/io.hpp"

namespace nnflow {

bool CaseReport::all_converged() const {
  if (points.empty()) return false;
  for (const auto& p : points)
    if (!p.converged) return false;
  return true;
}

double velocity_l2_error(const FunctionSpace& Usp, const Eigen::VectorXd& u,
                         const std::function<Vec2(const Vec2&)>& exact) {
  const auto rule = triangle_rule(2 * Usp.elem.degree() + 2);
  const Tabulation tab = tabulate(Usp.elem, rule.points);
  const Triangulation& mesh = *Usp.mesh;
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double detJ = 2.0 * mesh.cell_area(c);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 uh = Vec2::Zero();
      for (int l = 0; l < Usp.nodes_per_cell; ++l) {
        const int n = Usp.node(c, l);
        uh[0] += tab.values(q, l) * u[2 * n];
        uh[1] += tab.values(q, l) * u[2 * n + 1];
      }
      const Vec2 diff = uh - exact(mesh.cell_point(c, rule.points[q]));
      acc += rule.weights[q] * detJ * diff.squaredNorm();
    }
  }
  return std::sqrt(acc);
}

double mean_eff_viscosity(const ProblemDefinition& prob, const BlockField& state, double x1_min) {
  const Vec2 center(1.0 / 3.0, 1.0 / 3.0);
  const Triangulation& mesh = *prob.mesh;
  double acc = 0.0, area = 0.0;
  double sval[2];
  double uval[2];
  Eigen::Matrix<double, -1, 2> gu(2, 2);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.cell_point(c, center)[0] <= x1_min) continue;
    eval_in_cell(prob.Ssp, state.S, c, center, sval);
    eval_in_cell(prob.Usp, state.u, c, center, uval, &gu);
    const SymT S{sval[0], sval[1]};
    const SymT D = deviator(gu(0, 0), 0.5 * (gu(0, 1) + gu(1, 0)), gu(1, 1));
    const double a = mesh.cell_area(c);
    acc += a * prob.model.eff_viscosity(norm2(S), norm2(D));
    area += a;
  }
  return area > 0.0 ? acc / area : 0.0;
}

void write_fields(const ProblemDefinition& prob, const BlockField& state, const std::string& path) {
  const Triangulation& mesh = *prob.mesh;
  std::vector<Vec2> uvals(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) uvals[v] = Vec2(state.u[2 * v], state.u[2 * v + 1]);

  const Vec2 center(1.0 / 3.0, 1.0 / 3.0);
  std::vector<double> pvals(mesh.n_cells()), smag(mesh.n_cells()), mueff(mesh.n_cells());
  double sval[2];
  double uval[2];
  double pval;
  Eigen::Matrix<double, -1, 2> gu(2, 2);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    eval_in_cell(prob.Psp, state.p, c, center, &pval);
    eval_in_cell(prob.Ssp, state.S, c, center, sval);
    eval_in_cell(prob.Usp, state.u, c, center, uval, &gu);
    const SymT S{sval[0], sval[1]};
    const SymT D = deviator(gu(0, 0), 0.5 * (gu(0, 1) + gu(1, 0)), gu(1, 1));
    pvals[c] = pval;
    smag[c] = tnorm(S);
    mueff[c] = prob.model.eff_viscosity(norm2(S), norm2(D));
  }
  write_vtk(path, mesh, {{"u", uvals}}, {{"p", pvals}, {"S_mag", smag}, {"mu_eff", mueff}});
}

void write_report(const CaseReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open " + path);
  out << "case,k,refs,dofs,param,newton_its,krylov_total,krylov_avg,err_L2,div_L2,wall_s\n";
  char buf[256];
  for (const auto& p : rep.points) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%ld,%.10g,%d,%ld,%.2f,%.6e,%.6e,%.2f\n",
                  rep.case_name.c_str(), rep.k, rep.refs, rep.dofs, p.param, p.newton_its, p.krylov_total,
                  p.krylov_avg, p.err_L2, p.div_L2, p.wall_s);
    out << buf;
  }
}

CaseReport run_case(const RunConfig& cfg) {
  HierarchyProblem hp = build_case(cfg);
  CaseReport rep;
  rep.case_name = cfg.case_name;
  rep.k = cfg.k;
  rep.refs = cfg.refs;
  rep.dofs = hp.fine().n_total();

  MGConfig mgc;
  mgc.cycles = cfg.cycles;
  mgc.sweeps = cfg.sweeps;
  mgc.jacobi_relax = cfg.jacobi_relax;
  NewtonConfig nc;
  nc.tol = cfg.newton_tol;
  nc.max_iter = cfg.max_newton;
  nc.nu_schur = cfg.nu;
  nc.krylov.rtol = cfg.krylov_tol;
  nc.krylov.max_iter = cfg.max_krylov;
  nc.mg = mgc;

  StressVelocityMG mg(hp.h, hp.levels, mgc);

  if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);

  BlockField state = hp.fine().zero_state();
  hp.fine().apply_dirichlet_values(state);

  if (!cfg.schedule.empty()) set_sweep_value(hp, cfg.sweep, cfg.schedule.front());

  if (cfg.fd_check) {
    BlockField probe = state;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-0.05, 0.05);
    for (auto* f : {&probe.S, &probe.u, &probe.p})
      for (int i = 0; i < f->size(); ++i) (*f)[i] += dist(rng);
    std::printf("fd-check: max rel err %.3e\n", jacobian_fd_check(hp.fine(), probe, 5));
  }

  if (cfg.dump_blocks && !cfg.out_dir.empty()) {
    const JacobianBlocks blocks = assemble_jacobian(hp.fine(), state);
    const LinearSystem sys = build_system(hp.fine(), blocks);
    write_matrix_market(cfg.out_dir + "/ZSS.mtx", sys.ZSS);
    write_matrix_market(cfg.out_dir + "/ZSu.mtx", sys.ZSu);
    write_matrix_market(cfg.out_dir + "/ZuS.mtx", sys.ZuS);
    write_matrix_market(cfg.out_dir + "/Zuu.mtx", sys.Zuu);
    write_matrix_market(cfg.out_dir + "/B.mtx", sys.B);
  }

  std::vector<std::pair<double, BlockField>> sols;  // last two converged points
  BlockField last = state;
  for (size_t i = 0; i < cfg.schedule.size(); ++i) {
    const double value = cfg.schedule[i];
    set_sweep_value(hp, cfg.sweep, value);

    BlockField iterate;
    if (sols.empty())
      iterate = state;
    else if (cfg.continuation == "secant" && sols.size() >= 2)
      iterate = secant_extrapolate(sols[0].second, sols[1].second,
                                   (value - sols[1].first) / (sols[1].first - sols[0].first));
    else
      iterate = sols.back().second;

    PointReport pt;
    pt.param = value;
    const auto t0 = std::chrono::steady_clock::now();
    const NewtonReport nr = newton_solve(hp, mg, iterate, nc);
    pt.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pt.newton_its = nr.iterations;
    pt.krylov_total = nr.krylov_total;
    pt.krylov_avg = nr.iterations > 0 ? static_cast<double>(nr.krylov_total) / nr.iterations : 0.0;
    pt.converged = nr.converged;
    if (nr.converged) {
      pt.div_L2 = norm_div_l2(hp.fine().Usp, iterate.u);
      if (cfg.case_name == "bingham-channel")
        pt.err_L2 = velocity_l2_error(hp.fine().Usp, iterate.u, [](const Vec2& x) {
          return exact_bingham(x, 2.0, 1.0, 4.0).first;
        });
      sols.emplace_back(value, iterate);
      if (sols.size() > 2) sols.erase(sols.begin());
      last = iterate;
    }
    rep.points.push_back(pt);
    std::printf("%s %s=%g: newton %d krylov %ld avg %.2f div %.2e%s\n", cfg.case_name.c_str(),
                cfg.sweep.c_str(), value, pt.newton_its, pt.krylov_total, pt.krylov_avg, pt.div_L2,
                pt.converged ? "" : " [failed]");
    std::fflush(stdout);
  }

  if (!cfg.out_dir.empty()) {
    write_report(rep, cfg.out_dir + "/report.csv");
    write_fields(hp.fine(), last, cfg.out_dir + "/fields.vtk");
  }
  return rep;
}

}  // namespace nnflow

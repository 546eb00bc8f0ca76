#pragma once

#include "nnflow/cases.hpp"

namespace nnflow {

struct PointReport {
  double param = 0.0;
  int newton_its = 0;
  long krylov_total = 0;
  double krylov_avg = 0.0;
  double err_L2 = 0.0;
  double div_L2 = 0.0;
  double wall_s = 0.0;
  bool converged = false;
};

struct CaseReport {
  std::string case_name;
  int k = 2;
  int refs = 0;
  long dofs = 0;
  std::vector<PointReport> points;
  bool all_converged() const;
};

// Runs the configured sweep with continuation; prints one line per point.
CaseReport run_case(const RunConfig& cfg);

void write_report(const CaseReport& rep, const std::string& path);

// VTK output: velocity at vertices, pressure / |S| / effective viscosity as
// cell data.
void write_fields(const ProblemDefinition& prob, const BlockField& state, const std::string& path);

double velocity_l2_error(const FunctionSpace& Usp, const Eigen::VectorXd& u,
                         const std::function<Vec2(const Vec2&)>& exact);

// Area-weighted mean of the effective viscosity over cells with barycenter
// x1 > x1_min.
double mean_eff_viscosity(const ProblemDefinition& prob, const BlockField& state, double x1_min);

}  // namespace nnflow

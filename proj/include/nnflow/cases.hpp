#pragma once

#include "nnflow/config.hpp"
#include "nnflow/newton.hpp"

namespace nnflow {

// Plane Poiseuille flow of a Bingham fluid between plates at x2 = +-1 with
// pressure gradient C and yield stress tau_y (tau_y < C so the plug lies
// inside the channel). Returns (velocity, pressure) at x.
std::pair<Vec2, double> exact_bingham(const Vec2& x, double C, double tau_y, double L);

ConstitutiveModel make_model(const RunConfig& cfg);

// Mesh hierarchy and per-level problems for a configured case.
HierarchyProblem build_case(const RunConfig& cfg);

// Applies a sweep-parameter value to the model of every level.
void set_sweep_value(HierarchyProblem& hp, const std::string& param, double value);

}  // namespace nnflow

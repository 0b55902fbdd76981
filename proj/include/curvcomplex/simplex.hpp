// Bounded-variable revised simplex for LinearModel relaxations.
//
// Every row r gets a logical variable s_r = a_r^T x, bounded [rhs, rhs] for
// equalities and (-inf, rhs] for inequalities, so the all-logical basis is
// always available. The dual simplex (with bound flipping) runs whenever the
// starting basis is dual feasible; otherwise, and for the final cleanup, a
// composite primal simplex takes over.

#pragma once

#include "curvcomplex/linear_model.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace curvcomplex {

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper, Free };

/// Simplex basis over structural variables followed by row logicals.
struct Basis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(SolveStatus status);

struct SimplexOptions {
  std::int64_t iteration_limit = 10'000'000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-10;
  int refactor_interval = 100;
  /// Consecutive degenerate pivots before Bland's rule takes over.
  int bland_after = 60;
  /// Random cost shifts for the dual phase, removed before termination.
  bool perturb = true;
};

struct LPSolution {
  SolveStatus status = SolveStatus::IterationLimit;
  Eigen::VectorXd primal;
  double objective = 0.0;
  std::int64_t iterations = 0;
  double max_bound_violation = 0.0;
  double max_row_violation = 0.0;
  Basis basis;
  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Solves the LP relaxation (integrality flags are ignored). A warm basis
/// from a model with the same variables and a prefix of its rows is reused;
/// logicals of rows appended since are made basic.
LPSolution solve(const LinearModel& model, const SimplexOptions& options = {}, const Basis* warm = nullptr);

struct BoundChange {
  Index variable = 0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Applies the bound changes to a copy of `model` and re-solves warm from
/// `previous`.
LPSolution resolve_with_bounds(const LinearModel& model, const LPSolution& previous,
                               const std::vector<BoundChange>& changes, const SimplexOptions& options = {});

}  // namespace curvcomplex

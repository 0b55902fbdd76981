// Fixed-column MPS export / import and a plain "name value" solution dump.

#pragma once

#include "curvcomplex/linear_model.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace curvcomplex {

struct MpsOptions {
  std::string name = "CURVCPLX";
  /// Emit MARKER INTORG / INTEND around integral columns.
  bool integrality_markers = false;
};

/// Names used in the MPS file: tag-derived ("R12", "P3", "S0", ...) when
/// they are unique and fit 8 characters, positional ("V0", "W0") otherwise.
std::vector<std::string> variable_names(const LinearModel& model);
std::vector<std::string> row_names(const LinearModel& model);

/// Shortest decimal rendering of v that fits the 12-character MPS field.
std::string mps_number(double v);

void write_mps(const LinearModel& model, std::ostream& out, const MpsOptions& options = {});

/// Reads N, E, L and G rows (G rows are negated into L rows), COLUMNS with
/// optional integrality markers, RHS and BOUNDS (UP LO FX FR MI PL BV).
/// Throws std::runtime_error on malformed input or RANGES sections.
LinearModel read_mps(std::istream& in);

void write_solution(const LinearModel& model, const Eigen::VectorXd& values, std::ostream& out);

}  // namespace curvcomplex

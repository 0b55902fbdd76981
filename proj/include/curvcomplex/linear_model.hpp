// Solver-agnostic sparse linear program: min c^T x  s.t.  rows, bounds.

#pragma once

#include <Eigen/Core>

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace curvcomplex {

using Index = int;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { Equal, LessEqual };

/// Provenance of a variable or row, used for naming.
enum class Tag : unsigned char {
  Region,              // y_R^f
  Line,                // y_B^l (length model)
  Pair,                // y_B^{l1,l2}
  SurfaceContinuation,
  BoundaryContinuation,
  Consistency,
  Crossing,
  Generic,
};

struct ElementTag {
  Tag tag = Tag::Generic;
  Index element = 0;  // face / line / pair / edge index, or a running number
};

/// 8-character-safe name such as "R12", "P407", "S3".
std::string element_name(const ElementTag& tag);

class LinearModel {
 public:
  Index add_variable(double cost, double lower, double upper, bool integral, ElementTag tag);
  /// Appends a row; duplicate columns are summed.
  Index add_row(std::span<const Index> cols, std::span<const double> coefs, Relation relation, double rhs,
                ElementTag tag);

  Index num_variables() const { return static_cast<Index>(cost_.size()); }
  Index num_rows() const { return static_cast<Index>(relation_.size()); }
  std::size_t num_nonzeros() const { return row_cols_.size(); }

  double cost(Index j) const { return cost_[j]; }
  double lower(Index j) const { return lower_[j]; }
  double upper(Index j) const { return upper_[j]; }
  bool integral(Index j) const { return integral_[j] != 0; }
  const ElementTag& variable_tag(Index j) const { return var_tags_[j]; }

  void set_cost(Index j, double c) { cost_[j] = c; }
  void set_bounds(Index j, double lower, double upper);

  Relation relation(Index r) const { return relation_[r]; }
  double rhs(Index r) const { return rhs_[r]; }
  const ElementTag& row_tag(Index r) const { return row_tags_[r]; }
  std::span<const Index> row_columns(Index r) const;
  std::span<const double> row_coefficients(Index r) const;

  Eigen::VectorXd objective() const;
  /// c^T x with compensated summation.
  double evaluate(const Eigen::VectorXd& x) const;

  /// Row activities a_r^T x.
  Eigen::VectorXd activities(const Eigen::VectorXd& x) const;
  /// Largest violation of any row by x.
  double max_row_violation(const Eigen::VectorXd& x) const;
  /// Largest violation of any variable bound by x.
  double max_bound_violation(const Eigen::VectorXd& x) const;

  /// Throws std::invalid_argument when a row references an undeclared
  /// variable, a bound pair is inverted, or a cost is not finite.
  void validate() const;

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<char> integral_;
  std::vector<ElementTag> var_tags_;
  std::vector<std::size_t> row_start_{0};
  std::vector<Index> row_cols_;
  std::vector<double> row_coefs_;
  std::vector<Relation> relation_;
  std::vector<double> rhs_;
  std::vector<ElementTag> row_tags_;
};

}  // namespace curvcomplex

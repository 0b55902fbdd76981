#include "curvcomplex/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace curvcomplex {

std::string element_name(const ElementTag& tag) {
  char prefix = 'C';
  switch (tag.tag) {
    case Tag::Region: prefix = 'R'; break;
    case Tag::Line: prefix = 'L'; break;
    case Tag::Pair: prefix = 'P'; break;
    case Tag::SurfaceContinuation: prefix = 'S'; break;
    case Tag::BoundaryContinuation: prefix = 'B'; break;
    case Tag::Consistency: prefix = 'K'; break;
    case Tag::Crossing: prefix = 'X'; break;
    case Tag::Generic: prefix = 'C'; break;
  }
  return prefix + std::to_string(tag.element);
}

Index LinearModel::add_variable(double cost, double lower, double upper, bool integral, ElementTag tag) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integral_.push_back(integral ? 1 : 0);
  var_tags_.push_back(tag);
  return static_cast<Index>(cost_.size()) - 1;
}

Index LinearModel::add_row(std::span<const Index> cols, std::span<const double> coefs, Relation relation, double rhs,
                           ElementTag tag) {
  if (cols.size() != coefs.size()) throw std::invalid_argument("add_row: column / coefficient length mismatch");
  std::vector<std::size_t> order(cols.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cols[a] < cols[b]; });
  for (std::size_t k = 0; k < order.size();) {
    const Index c = cols[order[k]];
    double v = 0.0;
    for (; k < order.size() && cols[order[k]] == c; ++k) v += coefs[order[k]];
    if (v != 0.0) {
      row_cols_.push_back(c);
      row_coefs_.push_back(v);
    }
  }
  row_start_.push_back(row_cols_.size());
  relation_.push_back(relation);
  rhs_.push_back(rhs);
  row_tags_.push_back(tag);
  return static_cast<Index>(relation_.size()) - 1;
}

void LinearModel::set_bounds(Index j, double lower, double upper) {
  lower_[j] = lower;
  upper_[j] = upper;
}

std::span<const Index> LinearModel::row_columns(Index r) const {
  return std::span<const Index>(row_cols_).subspan(row_start_[r], row_start_[r + 1] - row_start_[r]);
}

std::span<const double> LinearModel::row_coefficients(Index r) const {
  return std::span<const double>(row_coefs_).subspan(row_start_[r], row_start_[r + 1] - row_start_[r]);
}

Eigen::VectorXd LinearModel::objective() const {
  return Eigen::Map<const Eigen::VectorXd>(cost_.data(), static_cast<Eigen::Index>(cost_.size()));
}

double LinearModel::evaluate(const Eigen::VectorXd& x) const {
  // Neumaier summation: data terms of opposite sign nearly cancel.
  double sum = 0.0, carry = 0.0;
  for (Index j = 0; j < num_variables(); ++j) {
    const double term = cost_[j] * x[j];
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + carry;
}

Eigen::VectorXd LinearModel::activities(const Eigen::VectorXd& x) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(num_rows());
  for (Index r = 0; r < num_rows(); ++r) {
    const auto cols = row_columns(r);
    const auto vals = row_coefficients(r);
    for (std::size_t k = 0; k < cols.size(); ++k) a[r] += vals[k] * x[cols[k]];
  }
  return a;
}

double LinearModel::max_row_violation(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd a = activities(x);
  double worst = 0.0;
  for (Index r = 0; r < num_rows(); ++r) {
    const double v = relation_[r] == Relation::Equal ? std::abs(a[r] - rhs_[r]) : std::max(0.0, a[r] - rhs_[r]);
    worst = std::max(worst, v);
  }
  return worst;
}

double LinearModel::max_bound_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (Index j = 0; j < num_variables(); ++j)
    worst = std::max({worst, lower_[j] - x[j], x[j] - upper_[j]});
  return worst;
}

void LinearModel::validate() const {
  for (Index j = 0; j < num_variables(); ++j) {
    if (!std::isfinite(cost_[j])) throw std::invalid_argument("linear model: non-finite cost");
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j])
      throw std::invalid_argument("linear model: inverted or NaN bounds on " + element_name(var_tags_[j]));
  }
  for (Index c : row_cols_)
    if (c < 0 || c >= num_variables()) throw std::invalid_argument("linear model: row references unknown variable");
  for (double r : rhs_)
    if (!std::isfinite(r)) throw std::invalid_argument("linear model: non-finite right-hand side");
}

}  // namespace curvcomplex

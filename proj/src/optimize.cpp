#include "curvcomplex/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace curvcomplex {

std::vector<std::size_t> violated_crossings(const VariableMap& map, const Eigen::VectorXd& x, double tolerance) {
  std::vector<std::size_t> out;
  const double limit = map.capacity + tolerance * std::max(1.0, map.capacity);
  for (std::size_t k = 0; k < map.crossings.size(); ++k) {
    const auto& [a, b] = map.crossings[k];
    if (x[a] + x[b] > limit) out.push_back(k);
  }
  return out;
}

PassResult crossing_pass_loop(LinearModel& model, const VariableMap& map, const SegmentationOptions& options,
                              const Basis* warm) {
  PassResult out;
  std::vector<char> added(map.crossings.size(), 0);
  const std::array<double, 2> ones{1.0, 1.0};
  auto add = [&](std::size_t k) {
    if (added[k]) return;
    added[k] = 1;
    const std::array<Index, 2> cols{map.crossings[k].first, map.crossings[k].second};
    model.add_row(cols, ones, Relation::LessEqual, map.capacity, {Tag::Crossing, static_cast<Index>(k)});
    ++out.rows_added;
  };
  // Rows already present (from an earlier loop on this model) are recognized by tag.
  for (Index r = 0; r < model.num_rows(); ++r) {
    const ElementTag& t = model.row_tag(r);
    if (t.tag == Tag::Crossing && t.element >= 0 && static_cast<std::size_t>(t.element) < added.size())
      added[t.element] = 1;
  }
  if (options.crossings == CrossingPolicy::Eager)
    for (std::size_t k = 0; k < map.crossings.size(); ++k) add(k);

  out.solution = solve(model, options.simplex, warm);
  out.passes = 1;
  if (out.solution.optimal()) out.bounds.push_back(out.solution.objective);
  while (options.crossings == CrossingPolicy::Lazy && out.solution.optimal()) {
    const auto violated = violated_crossings(map, out.solution.primal);
    if (violated.empty()) break;
    if (out.passes >= options.max_passes)
      throw std::runtime_error("crossing passes exceeded the cap of " + std::to_string(options.max_passes));
    for (std::size_t k : violated) add(k);
    const std::int64_t before = out.solution.iterations;
    out.solution = solve(model, options.simplex, &out.solution.basis);
    out.solution.iterations += before;
    ++out.passes;
    if (out.solution.optimal()) out.bounds.push_back(out.solution.objective);
  }
  return out;
}

LinearModel fix_regions(const LinearModel& model, const VariableMap& map, const CellComplex& cx,
                        const std::vector<double>& values, bool fix_impossible) {
  LinearModel out = model;
  for (Index f = 0; f < cx.num_faces(); ++f)
    if (map.region[f] >= 0) out.set_bounds(map.region[f], values[f], values[f]);
  if (!fix_impossible || map.pair.empty()) return out;

  // Net region incidence per edge; a line can only be used by an integral
  // completion if it points the same way as this jump.
  std::vector<double> jump(static_cast<std::size_t>(cx.num_edges()), 0.0);
  for (Index e = 0; e < cx.num_edges(); ++e) {
    const Edge& edge = cx.edges()[e];
    for (Index f : {edge.positive_face, edge.negative_face})
      if (f >= 0 && map.region[f] >= 0) jump[e] += cx.incidence_region(e, f) * values[f];
  }
  auto usable = [&](Index l) {
    const OrientedLine& line = cx.lines()[l];
    return jump[line.edge] * line.sign > 0.0;
  };
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    const Index v = map.pair[p];
    if (v < 0) continue;
    const LinePair& pr = cx.pairs()[p];
    if (!usable(pr.first) || !usable(pr.second)) out.set_bounds(v, 0.0, 0.0);
  }
  return out;
}

namespace {

SegmentationResult run_pipeline(const LinearModel& model, const VariableMap& map, const CellComplex& cx,
                                double offset, const SegmentationOptions& options, bool rounded) {
  if (map.region.size() != static_cast<std::size_t>(cx.num_faces()))
    throw std::invalid_argument("segment: variable map does not match the complex");
  SegmentationResult res;
  res.constant_offset = offset;

  LinearModel relaxed = model;
  PassResult relax = crossing_pass_loop(relaxed, map, options);
  res.iterations = relax.solution.iterations;
  res.relaxation_passes = relax.passes;
  for (double b : relax.bounds) res.pass_bounds.push_back(b + offset);
  if (!relax.solution.optimal()) {
    res.status = relax.solution.status;
    return res;
  }
  res.relaxation = relax.solution.primal;
  res.lower_bound = relax.solution.objective + offset;

  const double cap = map.capacity;
  res.face_values.assign(static_cast<std::size_t>(cx.num_faces()), 0.0);
  for (Index f = 0; f < cx.num_faces(); ++f) {
    const Index v = map.region[f];
    if (v < 0) continue;
    const double y = res.relaxation[v];
    if (rounded) res.face_values[f] = std::clamp(std::round(y), model.lower(v), model.upper(v));
    else res.face_values[f] = y >= options.threshold * cap ? cap : 0.0;
    if (y > 0.4 * cap && y < 0.6 * cap) ++res.ambiguous_count;
  }

  LinearModel fixed = fix_regions(relaxed, map, cx, res.face_values, options.fix_impossible);
  PassResult bound = crossing_pass_loop(fixed, map, options, &relax.solution.basis);
  res.iterations += bound.solution.iterations;
  res.passes = bound.passes;
  res.status = bound.solution.status;
  if (!bound.solution.optimal()) {
    if (bound.solution.status == SolveStatus::Infeasible)
      throw std::logic_error("boundary re-solve is infeasible for an integral labeling");
    return res;
  }
  res.solution = bound.solution.primal;
  res.energy = bound.solution.objective + offset;
  res.relative_gap = res.energy != 0.0 ? (res.energy - res.lower_bound) / std::abs(res.energy) : 0.0;

  res.data_part = offset;
  for (Index f = 0; f < cx.num_faces(); ++f)
    if (map.region[f] >= 0) res.data_part += model.cost(map.region[f]) * res.solution[map.region[f]];
  if (map.length_cost.size() == res.solution.size()) {
    res.length_part = map.length_cost.dot(res.solution);
    res.curvature_part = map.curvature_cost.dot(res.solution);
  }
  for (Index v = 0; v < fixed.num_variables(); ++v) {
    const Tag t = fixed.variable_tag(v).tag;
    if (t == Tag::Region) continue;
    const double y = res.solution[v];
    if (std::abs(y - std::round(y)) > 1e-6) ++res.fractional_count;
  }
  for (Index p = 0; p < static_cast<Index>(map.pair.size()); ++p)
    if (map.pair[p] >= 0 && res.solution[map.pair[p]] > 0.5) res.active_pairs.push_back(p);
  return res;
}

}  // namespace

SegmentationResult segment(const LinearModel& model, const VariableMap& map, const CellComplex& complex,
                           double constant_offset, const SegmentationOptions& options) {
  return run_pipeline(model, map, complex, constant_offset, options, false);
}

SegmentationResult segment_rounded(const LinearModel& model, const VariableMap& map, const CellComplex& complex,
                                   double constant_offset, const SegmentationOptions& options) {
  return run_pipeline(model, map, complex, constant_offset, options, true);
}

}  // namespace curvcomplex

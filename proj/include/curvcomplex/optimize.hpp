// Relaxation, thresholding, boundary re-solve and crossing cutting planes.

#pragma once

#include "curvcomplex/cell_complex.hpp"
#include "curvcomplex/model.hpp"
#include "curvcomplex/simplex.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace curvcomplex {

enum class CrossingPolicy { Off, Lazy, Eager };

struct SegmentationOptions {
  CrossingPolicy crossings = CrossingPolicy::Lazy;
  double threshold = 0.5;
  int max_passes = 25;
  /// Fix pairs whose lines cannot lie on the thresholded boundary.
  bool fix_impossible = true;
  SimplexOptions simplex;
};

struct PassResult {
  LPSolution solution;
  int passes = 0;
  std::vector<double> bounds;  // objective after every pass
  int rows_added = 0;
};

/// Solves `model`, then repeatedly appends the violated crossing rows of
/// `map` and re-solves warm until none is violated. With the Eager policy
/// every crossing row is added up front. Throws std::runtime_error when the
/// pass cap is exceeded.
PassResult crossing_pass_loop(LinearModel& model, const VariableMap& map, const SegmentationOptions& options,
                              const Basis* warm = nullptr);

struct SegmentationResult {
  SolveStatus status = SolveStatus::Optimal;
  std::vector<double> face_values;   // thresholded (or rounded) region values, per face
  Eigen::VectorXd relaxation;        // relaxed values of all model variables
  Eigen::VectorXd solution;          // re-solved values of all model variables
  std::vector<Index> active_pairs;   // pair variables at their full capacity
  double constant_offset = 0.0;
  double energy = 0.0;               // re-solve objective + offset
  double lower_bound = 0.0;          // relaxation objective + offset
  double relative_gap = 0.0;         // (energy - lower_bound) / |energy|
  double data_part = 0.0;            // includes the offset
  double length_part = 0.0;
  double curvature_part = 0.0;
  int relaxation_passes = 0;
  int passes = 0;                    // crossing passes of the re-solve
  std::vector<double> pass_bounds;   // relaxation bound (with offset) per pass
  int fractional_count = 0;          // non-integral boundary variables after re-solve
  int ambiguous_count = 0;           // region values in (0.4, 0.6) of the capacity
  std::int64_t iterations = 0;

  /// Binary label of face f (value >= half the capacity).
  bool label(Index f) const { return face_values[f] > 0.0; }
};

/// Default rounding: threshold at options.threshold (segmentation).
SegmentationResult segment(const LinearModel& model, const VariableMap& map, const CellComplex& complex,
                           double constant_offset, const SegmentationOptions& options = {});

/// Same pipeline with region values rounded to the nearest integer in
/// [0, capacity] (inpainting).
SegmentationResult segment_rounded(const LinearModel& model, const VariableMap& map, const CellComplex& complex,
                                   double constant_offset, const SegmentationOptions& options = {});

/// Fixes region variables to `values` and pairs that cannot carry the
/// resulting boundary to 0.
LinearModel fix_regions(const LinearModel& model, const VariableMap& map, const CellComplex& complex,
                        const std::vector<double>& values, bool fix_impossible);

/// Crossing candidates of `map` violated by x.
std::vector<std::size_t> violated_crossings(const VariableMap& map, const Eigen::VectorXd& x, double tolerance = 1e-7);

}  // namespace curvcomplex

// Integer linear programs over a cell complex: length-regularized and
// curvature-regularized segmentation, and curvature inpainting.

#pragma once

#include "curvcomplex/cell_complex.hpp"
#include "curvcomplex/energy.hpp"
#include "curvcomplex/linear_model.hpp"

#include <Eigen/Core>

#include <optional>
#include <utility>
#include <vector>

namespace curvcomplex {

/// Links complex elements to model variables (-1 where absent).
struct VariableMap {
  std::vector<Index> region;  // face -> y_R^f
  std::vector<Index> line;    // oriented line -> y_B^l (length model only)
  std::vector<Index> pair;    // line pair -> y_B^{l1,l2}
  /// Per model variable, the length and curvature share of its cost.
  Eigen::VectorXd length_cost;
  Eigen::VectorXd curvature_cost;
  /// Crossing-prevention candidates as (variable, variable) pairs.
  std::vector<std::pair<Index, Index>> crossings;
  /// Right-hand side of consistency and crossing rows (1, or I_u - I_l).
  double capacity = 1.0;
};

struct ModelBundle {
  LinearModel model;
  VariableMap map;
};

ModelBundle build_length_model(const CellComplex& complex, const DataCost& data, double nu);

ModelBundle build_curvature_model(const CellComplex& complex, const DataCost& data, const EnergyParams& params,
                                  bool include_crossings = false);

enum class FaceRole : unsigned char { Inactive, Fixed, Free };

/// One damaged component, intensities already shifted so that I_l = 0.
struct InpaintDomain {
  std::vector<FaceRole> role;  // per face of the complex
  Eigen::VectorXd known;       // shifted intensity of Fixed faces
  double range = 0.0;          // I_u - I_l
};

/// Pair costs default to pair_cost without border rules, except that
/// pairs touching no Free face cost nothing; `pair_costs` (one entry per
/// complex pair) overrides them.
ModelBundle build_inpaint_model(const CellComplex& complex, const InpaintDomain& domain, const EnergyParams& params,
                                const std::optional<Eigen::VectorXd>& pair_costs = std::nullopt,
                                bool include_crossings = true);

/// Fixes every region variable of a seeded pixel: foreground to 1,
/// background to 0.
LinearModel fix_seeds(const LinearModel& model, const VariableMap& map, const CellComplex& complex,
                      const SeedMask& seeds);

/// Appends one crossing-prevention row per candidate.
void add_crossing_rows(LinearModel& model, const VariableMap& map);

}  // namespace curvcomplex

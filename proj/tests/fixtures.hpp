// Instances shared by the unit tests and the acceptance runner.

#pragma once

#include "curvcomplex/cell_complex.hpp"
#include "curvcomplex/energy.hpp"
#include "curvcomplex/inpaint.hpp"
#include "curvcomplex/linear_model.hpp"
#include "curvcomplex/model.hpp"

#include <Eigen/Core>

#include <random>
#include <string>
#include <vector>

namespace fixtures {

using namespace curvcomplex;

/// Faces having lattice point `node` as a vertex, ordered by the angle of
/// their centroid around it.
std::vector<Index> faces_around(const CellComplex& complex, LatticePoint node);

/// Line from vertex u to vertex w, or -1.
Index line_between(const CellComplex& complex, Index u, Index w);

/// Pair index for the lattice polyline a -> v -> b, or -1.
Index pair_through(const CellComplex& complex, Index a, Index v, Index b);

/// Model variables describing the closed vertex loops `loops` with the faces
/// `foreground` labeled 1; everything else 0.
Eigen::VectorXd loop_assignment(const CellComplex& complex, const VariableMap& map, Index num_variables,
                                const std::vector<Index>& foreground, const std::vector<std::vector<Index>>& loops);

/// Copy of `model` without the rows carrying tag `drop`.
LinearModel without_rows(const LinearModel& model, Tag drop);

/// Three foreground triangles around the center node of a 2x2 Conn8 grid,
/// separated by background triangles. Their cheapest boundary crosses
/// itself at the center.
struct Gadget {
  CellComplex complex;
  DataCost data;
  std::vector<Index> foreground;
};
Gadget three_region_gadget();

/// Random bounded LP with n variables and m rows. With `feasible` the rows
/// are built around a random interior point.
LinearModel random_lp(std::mt19937_64& rng, int n, int m, bool feasible = true);

/// Beale's cycling example: min -3/4 x1 + 20 x2 - 1/2 x3 + 6 x4.
LinearModel beale();

/// 32x32 image of a 1-pixel vertical bar with a 3-pixel noisy gap.
GrayImage bar_with_gap();

/// Binary mask of pixels whose foreground area exceeds one half.
Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> pixel_mask(const CellComplex& complex,
                                                                const std::vector<char>& face_label);

/// Number of 8-connected components of true pixels.
int count_components8(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask);

/// Directories holding the shipped test images and golden dumps.
std::string data_dir();
std::string golden_dir();

}  // namespace fixtures

// Curvature-regularized inpainting of damaged image regions.

#pragma once

#include "curvcomplex/cell_complex.hpp"
#include "curvcomplex/energy.hpp"
#include "curvcomplex/optimize.hpp"

#include <Eigen/Core>

#include <vector>

namespace curvcomplex {

/// Per-pixel flag indexed (row = y, col = x); true means damaged.
using DamageMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct DamagedComponent {
  std::vector<Pixel> pixels;  // 4-connected damaged pixels, row-major order
  std::vector<Pixel> band;    // undamaged 4-neighbours, row-major order
  double low = 0.0;           // I_l: minimum intensity over the band
  double high = 0.0;          // I_u: maximum intensity over the band
};

/// 4-connected components of the damaged set, in row-major order of their
/// first pixel.
std::vector<DamagedComponent> damaged_components(const GrayImage& image, const DamageMask& mask);

struct CoherenceField {
  Eigen::ArrayXXd dx, dy;                             // unit level-line direction
  Eigen::ArrayXXd jxx, jxy, jyy;                      // structure tensor
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;
  double sigma = 1.5;
  double rho = 4.0;

  Eigen::Vector2d direction(int x, int y) const { return {dx(y, x), dy(y, x)}; }
};

/// Masked-normalized Gaussian smoothing (support truncated at 3 standard
/// deviations): (K * (w . I)) / (K * w) where the weight sum is positive,
/// 0 elsewhere.
Eigen::ArrayXXd normalized_smoothing(const Eigen::ArrayXXd& values, const Eigen::ArrayXXd& weight, double sigma);

/// Level-line directions from the masked structure tensor: the unit
/// eigenvector of the smaller eigenvalue, oriented toward nearby damaged
/// pixels. Pixels with a vanishing tensor or no known data are invalid.
CoherenceField coherence_directions(const GrayImage& image, const DamageMask& mask, double sigma = 1.5,
                                    double rho = 4.0);

struct InpaintOptions {
  Connectivity connectivity = Connectivity::Conn8;
  EnergyParams params{};
  bool use_coherence = true;
  double sigma = 1.5;  // pre-smoothing of the image
  double rho = 4.0;    // integration scale of the structure tensor
  SegmentationOptions solver{};
};

struct ComponentFill {
  std::vector<double> values;  // per component pixel, original intensity units
  double energy = 0.0;
  double lower_bound = 0.0;
  double relative_gap = 0.0;
  int passes = 0;
  int fractional_count = 0;
  std::int64_t iterations = 0;
};

/// Pair costs of the inpainting model on `complex` whose pixel (0, 0) sits
/// at image pixel (origin_x, origin_y). Pairs that do not touch a damaged
/// face cost nothing. Pairs joining a band line and a line next to the
/// damaged region measure the turning angle against the coherence
/// direction instead of the band line's own direction.
Eigen::VectorXd inpaint_pair_costs(const CellComplex& complex, const std::vector<FaceRole>& roles,
                                   const EnergyParams& params, const CoherenceField* coherence, int origin_x,
                                   int origin_y);

ComponentFill inpaint_component(const GrayImage& image, const DamagedComponent& component,
                                const CoherenceField* coherence, const InpaintOptions& options);

/// Writes every fill into a copy of the image; retained pixels are copied
/// unchanged. Throws if a damaged pixel is left uncovered.
GrayImage assemble_output(const GrayImage& image, const DamageMask& mask,
                          const std::vector<DamagedComponent>& components, const std::vector<ComponentFill>& fills);

struct InpaintRun {
  GrayImage output;
  std::vector<DamagedComponent> components;
  std::vector<ComponentFill> fills;
};

InpaintRun inpaint(const GrayImage& image, const DamageMask& mask, const InpaintOptions& options);

}  // namespace curvcomplex

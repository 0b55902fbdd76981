// Region data costs and boundary (line / line-pair) costs.

#pragma once

#include "curvcomplex/cell_complex.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace curvcomplex {

/// Grayscale intensities indexed (row = y, col = x).
using GrayImage = Eigen::ArrayXXd;

/// Multi-channel raster, one intensity array per channel.
struct ColorImage {
  std::vector<Eigen::ArrayXXd> channels;
  int width() const { return channels.empty() ? 0 : static_cast<int>(channels.front().cols()); }
  int height() const { return channels.empty() ? 0 : static_cast<int>(channels.front().rows()); }
};

enum class WeightMode { AnglePower, Bruckstein };

struct EnergyParams {
  double nu = 1.0;      // length weight
  double lambda = 1.0;  // curvature weight
  double p = 2.0;       // curvature exponent
  WeightMode weight_mode = WeightMode::AnglePower;
};

/// Throws std::invalid_argument unless nu >= 0, lambda >= 0 and p > 0.
void validate(const EnergyParams& params);

struct DataCost {
  Eigen::VectorXd region;        // c_R, one entry per face
  double constant_offset = 0.0;  // energy of the all-background labeling
};

/// Piecewise-constant two-phase data term. With no means given, mu0 / mu1
/// default to the image minimum / maximum.
DataCost data_cost_unsupervised(const GrayImage& image, const CellComplex& complex,
                                std::optional<double> mu0 = std::nullopt, std::optional<double> mu1 = std::nullopt);

enum class Seed : unsigned char { None = 0, Background = 1, Foreground = 2 };

/// Per-pixel seed labels indexed (row = y, col = x).
using SeedMask = Eigen::Array<Seed, Eigen::Dynamic, Eigen::Dynamic>;

struct HistogramOptions {
  int bins = 8;                    // per channel
  double smoothing = 1.0;          // Gaussian std in bins, 0 disables
  double probability_floor = 1e-8;
  double max_intensity = 255.0;
};

/// Seeded color-histogram data term: foreground pays -log p_F, background
/// pays -log p_B, so c_R = (-log p_F + log p_B) * area.
DataCost data_cost_histogram(const ColorImage& image, const SeedMask& seeds, const CellComplex& complex,
                             const HistogramOptions& options = {});

/// Absolute turning angle between two directions, in [0, pi].
double turning_angle(const Eigen::Vector2d& d1, const Eigen::Vector2d& d2);

/// Angle between consecutive lines l1 -> l2 of the complex.
double turning_angle(const CellComplex& complex, Index l1, Index l2);

/// Curvature weight w(l1, l2) for a turning angle and the two line lengths.
double curvature_weight(double theta, double len1, double len2, const EnergyParams& params);

struct PairCostParts {
  double length = 0.0;     // nu * (l'(l1) + l'(l2)) / 2
  double curvature = 0.0;  // lambda * w(l1, l2)
  double total() const { return length + curvature; }
};

struct PairCostOptions {
  /// Zero length on the domain border and zero curvature at domain corners.
  bool border_rules = true;
  /// Replaces the geometric direction of the first / second line.
  std::optional<Eigen::Vector2d> first_direction;
  std::optional<Eigen::Vector2d> second_direction;
};

PairCostParts pair_cost_parts(const CellComplex& complex, const LinePair& pair, const EnergyParams& params,
                              const PairCostOptions& options = {});
double pair_cost(const CellComplex& complex, const LinePair& pair, const EnergyParams& params,
                 const PairCostOptions& options = {});

/// nu * l(edge(l)), the length-model boundary cost.
double length_cost(const CellComplex& complex, Index line, double nu);

}  // namespace curvcomplex

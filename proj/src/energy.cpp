#include "curvcomplex/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace curvcomplex {

void validate(const EnergyParams& params) {
  if (!(params.nu >= 0.0) || !(params.lambda >= 0.0) || !(params.p > 0.0))
    throw std::invalid_argument("energy parameters require nu >= 0, lambda >= 0, p > 0");
}

namespace {

void check_dimensions(int width, int height, const CellComplex& complex) {
  if (width == 0 || height == 0) throw std::invalid_argument("data cost: empty image");
  if (width != complex.width() || height != complex.height())
    throw std::invalid_argument("data cost: image size does not match the complex");
}

// Spreads a per-pixel cost g(px) over the faces of each pixel.
Eigen::VectorXd spread_over_faces(const Eigen::ArrayXXd& per_pixel, const CellComplex& complex) {
  Eigen::VectorXd cost(complex.num_faces());
  for (Index f = 0; f < complex.num_faces(); ++f) {
    const Face& face = complex.faces()[f];
    cost[f] = per_pixel(face.pixel_y, face.pixel_x) * complex.face_area(f);
  }
  return cost;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) sum += k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& v : k) v /= sum;
  return k;
}

// Separable smoothing of a dense histogram with `dims` axes of `bins` each.
void smooth_histogram(std::vector<double>& hist, int bins, int dims, double sigma) {
  if (sigma <= 0.0) return;
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> tmp(hist.size());
  int stride = 1;
  for (int axis = 0; axis < dims; ++axis) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (std::size_t i = 0; i < hist.size(); ++i) {
      const int pos = static_cast<int>(i / static_cast<std::size_t>(stride)) % bins;
      for (int k = -radius; k <= radius; ++k) {
        const int q = pos + k;
        if (q < 0 || q >= bins) continue;
        tmp[i + static_cast<std::size_t>(k * stride)] += kernel[k + radius] * hist[i];
      }
    }
    hist.swap(tmp);
    stride *= bins;
  }
}

}  // namespace

DataCost data_cost_unsupervised(const GrayImage& image, const CellComplex& complex, std::optional<double> mu0,
                                std::optional<double> mu1) {
  check_dimensions(static_cast<int>(image.cols()), static_cast<int>(image.rows()), complex);
  const double m0 = mu0.value_or(image.minCoeff());
  const double m1 = mu1.value_or(image.maxCoeff());
  const Eigen::ArrayXXd bg = (image - m0).square();
  const Eigen::ArrayXXd fg = (image - m1).square();
  DataCost cost;
  cost.region = spread_over_faces(fg - bg, complex);
  cost.constant_offset = bg.sum();
  return cost;
}

DataCost data_cost_histogram(const ColorImage& image, const SeedMask& seeds, const CellComplex& complex,
                             const HistogramOptions& options) {
  check_dimensions(image.width(), image.height(), complex);
  if (seeds.rows() != image.height() || seeds.cols() != image.width())
    throw std::invalid_argument("histogram data cost: seed mask size does not match the image");
  if (options.bins < 1) throw std::invalid_argument("histogram data cost: bins must be >= 1");
  const int dims = static_cast<int>(image.channels.size());
  const int bins = options.bins;
  std::size_t total = 1;
  for (int d = 0; d < dims; ++d) total *= static_cast<std::size_t>(bins);

  auto bin_of = [&](int y, int x) {
    std::size_t index = 0, stride = 1;
    for (int d = 0; d < dims; ++d) {
      const double v = std::clamp(image.channels[d](y, x), 0.0, options.max_intensity);
      const int b = std::min(bins - 1, static_cast<int>(v * bins / (options.max_intensity + 1.0)));
      index += static_cast<std::size_t>(b) * stride;
      stride *= static_cast<std::size_t>(bins);
    }
    return index;
  };

  std::vector<double> fg(total, 0.0), bg(total, 0.0);
  double nfg = 0.0, nbg = 0.0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (seeds(y, x) == Seed::Foreground) {
        fg[bin_of(y, x)] += 1.0;
        nfg += 1.0;
      } else if (seeds(y, x) == Seed::Background) {
        bg[bin_of(y, x)] += 1.0;
        nbg += 1.0;
      }
    }
  }
  if (nfg == 0.0 || nbg == 0.0)
    throw std::invalid_argument("histogram data cost: need at least one foreground and one background seed");
  smooth_histogram(fg, bins, dims, options.smoothing);
  smooth_histogram(bg, bins, dims, options.smoothing);
  const double sfg = std::accumulate(fg.begin(), fg.end(), 0.0);
  const double sbg = std::accumulate(bg.begin(), bg.end(), 0.0);

  Eigen::ArrayXXd g(image.height(), image.width());
  double offset = 0.0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const std::size_t b = bin_of(y, x);
      const double pf = std::max(fg[b] / sfg, options.probability_floor);
      const double pb = std::max(bg[b] / sbg, options.probability_floor);
      g(y, x) = -std::log(pf) + std::log(pb);
      offset += -std::log(pb);
    }
  }
  return {spread_over_faces(g, complex), offset};
}

double turning_angle(const Eigen::Vector2d& d1, const Eigen::Vector2d& d2) {
  const double c = d1.x() * d2.y() - d1.y() * d2.x();
  const double d = d1.dot(d2);
  return std::atan2(std::abs(c), d);
}

double turning_angle(const CellComplex& complex, Index l1, Index l2) {
  return turning_angle(complex.lines()[l1].direction, complex.lines()[l2].direction);
}

double curvature_weight(double theta, double len1, double len2, const EnergyParams& params) {
  if (params.weight_mode == WeightMode::AnglePower) return std::pow(theta, params.p);
  const double m = std::min(len1, len2);
  return m * std::pow(theta / m, params.p);
}

PairCostParts pair_cost_parts(const CellComplex& complex, const LinePair& pair, const EnergyParams& params,
                              const PairCostOptions& options) {
  const OrientedLine& l1 = complex.lines()[pair.first];
  const OrientedLine& l2 = complex.lines()[pair.second];
  const Edge& e1 = complex.edges()[l1.edge];
  const Edge& e2 = complex.edges()[l2.edge];

  PairCostParts parts;
  const double len1 = (options.border_rules && e1.on_border) ? 0.0 : e1.length;
  const double len2 = (options.border_rules && e2.on_border) ? 0.0 : e2.length;
  parts.length = params.nu * 0.5 * (len1 + len2);

  if (options.border_rules && complex.is_domain_corner(pair.node)) return parts;
  const Eigen::Vector2d d1 = options.first_direction.value_or(l1.direction);
  const Eigen::Vector2d d2 = options.second_direction.value_or(l2.direction);
  const double theta = turning_angle(d1, d2);
  parts.curvature = params.lambda * curvature_weight(theta, e1.length, e2.length, params);
  return parts;
}

double pair_cost(const CellComplex& complex, const LinePair& pair, const EnergyParams& params,
                 const PairCostOptions& options) {
  return pair_cost_parts(complex, pair, params, options).total();
}

double length_cost(const CellComplex& complex, Index line, double nu) {
  return nu * complex.edges()[complex.lines()[line].edge].length;
}

}  // namespace curvcomplex

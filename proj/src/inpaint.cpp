#include "curvcomplex/inpaint.hpp"

#include "curvcomplex/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvcomplex {

std::vector<DamagedComponent> damaged_components(const GrayImage& image, const DamageMask& mask) {
  if (image.rows() != mask.rows() || image.cols() != mask.cols())
    throw std::invalid_argument("damaged_components: mask size does not match the image");
  const int h = static_cast<int>(mask.rows()), w = static_cast<int>(mask.cols());
  Eigen::ArrayXXi label = Eigen::ArrayXXi::Constant(h, w, -1);
  std::vector<DamagedComponent> out;
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  std::vector<Pixel> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask(y, x) || label(y, x) >= 0) continue;
      const int id = static_cast<int>(out.size());
      DamagedComponent comp;
      label(y, x) = id;
      stack.assign(1, {x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        comp.pixels.push_back(p);
        for (int k = 0; k < 4; ++k) {
          const int nx = p.x + dx[k], ny = p.y + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h || !mask(ny, nx) || label(ny, nx) >= 0) continue;
          label(ny, nx) = id;
          stack.push_back({nx, ny});
        }
      }
      auto row_major = [](const Pixel& a, const Pixel& b) { return a.y < b.y || (a.y == b.y && a.x < b.x); };
      std::sort(comp.pixels.begin(), comp.pixels.end(), row_major);
      for (const Pixel& p : comp.pixels)
        for (int k = 0; k < 4; ++k) {
          const int nx = p.x + dx[k], ny = p.y + dy[k];
          if (nx >= 0 && ny >= 0 && nx < w && ny < h && !mask(ny, nx)) comp.band.push_back({nx, ny});
        }
      std::sort(comp.band.begin(), comp.band.end(), row_major);
      comp.band.erase(std::unique(comp.band.begin(), comp.band.end()), comp.band.end());
      if (!comp.band.empty()) {
        comp.low = comp.high = image(comp.band[0].y, comp.band[0].x);
        for (const Pixel& p : comp.band) {
          comp.low = std::min(comp.low, image(p.y, p.x));
          comp.high = std::max(comp.high, image(p.y, p.x));
        }
      }
      out.push_back(std::move(comp));
    }
  return out;
}

Eigen::ArrayXXd normalized_smoothing(const Eigen::ArrayXXd& values, const Eigen::ArrayXXd& weight, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normalized_smoothing: sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (int k = -radius; k <= radius; ++k) kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));

  const Eigen::Index h = values.rows(), w = values.cols();
  auto convolve = [&](const Eigen::ArrayXXd& in) {
    Eigen::ArrayXXd tmp = Eigen::ArrayXXd::Zero(h, w), out = Eigen::ArrayXXd::Zero(h, w);
    for (Eigen::Index y = 0; y < h; ++y)
      for (Eigen::Index x = 0; x < w; ++x) {
        double s = 0.0;
        for (int k = -radius; k <= radius; ++k)
          if (x + k >= 0 && x + k < w) s += kernel[k + radius] * in(y, x + k);
        tmp(y, x) = s;
      }
    for (Eigen::Index y = 0; y < h; ++y)
      for (Eigen::Index x = 0; x < w; ++x) {
        double s = 0.0;
        for (int k = -radius; k <= radius; ++k)
          if (y + k >= 0 && y + k < h) s += kernel[k + radius] * tmp(y + k, x);
        out(y, x) = s;
      }
    return out;
  };
  const Eigen::ArrayXXd num = convolve(values * weight);
  const Eigen::ArrayXXd den = convolve(weight);
  return (den > 1e-12).select(num / den.max(1e-300), 0.0);
}

CoherenceField coherence_directions(const GrayImage& image, const DamageMask& mask, double sigma, double rho) {
  if (image.rows() != mask.rows() || image.cols() != mask.cols())
    throw std::invalid_argument("coherence_directions: mask size does not match the image");
  if (!(sigma > 0.0) || !(rho > 0.0)) throw std::invalid_argument("coherence_directions: sigma and rho must be positive");
  const int h = static_cast<int>(image.rows()), w = static_cast<int>(image.cols());
  const Eigen::ArrayXXd known = (!mask).cast<double>();

  // Differences are taken on the raw image wherever the stencil is known,
  // then smoothed; smoothing and differencing commute away from the holes.
  Eigen::ArrayXXd gx = Eigen::ArrayXXd::Zero(h, w), gy = Eigen::ArrayXXd::Zero(h, w);
  Eigen::ArrayXXd wx = Eigen::ArrayXXd::Zero(h, w), wy = Eigen::ArrayXXd::Zero(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int xl = std::max(x - 1, 0), xr = std::min(x + 1, w - 1);
      const int yl = std::max(y - 1, 0), yr = std::min(y + 1, h - 1);
      if (xr > xl && !mask(y, xl) && !mask(y, xr)) {
        gx(y, x) = (image(y, xr) - image(y, xl)) / (xr - xl);
        wx(y, x) = 1.0;
      }
      if (yr > yl && !mask(yl, x) && !mask(yr, x)) {
        gy(y, x) = (image(yr, x) - image(yl, x)) / (yr - yl);
        wy(y, x) = 1.0;
      }
    }
  gx = normalized_smoothing(gx, wx, sigma);
  gy = normalized_smoothing(gy, wy, sigma);
  const Eigen::ArrayXXd both = normalized_smoothing(wx * wy, Eigen::ArrayXXd::Ones(h, w), sigma);
  const Eigen::ArrayXXd weight = (both > 0.0).cast<double>() * known;

  CoherenceField field;
  field.sigma = sigma;
  field.rho = rho;
  field.jxx = normalized_smoothing(gx * gx, weight, rho);
  field.jxy = normalized_smoothing(gx * gy, weight, rho);
  field.jyy = normalized_smoothing(gy * gy, weight, rho);
  const Eigen::ArrayXXd support = normalized_smoothing(weight, weight, rho);
  field.dx = Eigen::ArrayXXd::Zero(h, w);
  field.dy = Eigen::ArrayXXd::Zero(h, w);
  field.valid.setConstant(h, w, false);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      Eigen::Matrix2d J;
      J << field.jxx(y, x), field.jxy(y, x), field.jxy(y, x), field.jyy(y, x);
      if (support(y, x) <= 0.0 || J.trace() <= 1e-12) continue;
      eig.computeDirect(J);
      Eigen::Vector2d v = eig.eigenvectors().col(0).normalized();
      // Orient toward the damaged pixels nearby, or canonically.
      Eigen::Vector2d toward = Eigen::Vector2d::Zero();
      for (int oy = -2; oy <= 2; ++oy)
        for (int ox = -2; ox <= 2; ++ox) {
          const int nx = x + ox, ny = y + oy;
          if (nx >= 0 && ny >= 0 && nx < w && ny < h && mask(ny, nx)) toward += Eigen::Vector2d(ox, oy);
        }
      const double dot = v.dot(toward);
      if (dot < 0.0 || (dot == 0.0 && (v.x() < 0.0 || (v.x() == 0.0 && v.y() < 0.0)))) v = -v;
      field.dx(y, x) = v.x();
      field.dy(y, x) = v.y();
      field.valid(y, x) = true;
    }
  return field;
}

Eigen::VectorXd inpaint_pair_costs(const CellComplex& cx, const std::vector<FaceRole>& roles,
                                   const EnergyParams& params, const CoherenceField* coherence, int origin_x,
                                   int origin_y) {
  // Per edge: owning band face if the edge lies in the known band only,
  // and whether it touches the damaged region.
  std::vector<Index> band_face(static_cast<std::size_t>(cx.num_edges()), -1);
  std::vector<char> damaged_side(static_cast<std::size_t>(cx.num_edges()), 0);
  for (Index e = 0; e < cx.num_edges(); ++e) {
    const Edge& edge = cx.edges()[e];
    Index fixed_face = -1;
    for (Index f : {edge.positive_face, edge.negative_face}) {
      if (f < 0) continue;
      if (roles[f] == FaceRole::Free) damaged_side[e] = 1;
      if (roles[f] == FaceRole::Fixed && fixed_face < 0) fixed_face = f;
    }
    if (!damaged_side[e]) band_face[e] = fixed_face;
  }

  auto coherent = [&](Index line, Index face) -> std::optional<Eigen::Vector2d> {
    if (!coherence) return std::nullopt;
    const Face& fc = cx.faces()[face];
    const int x = fc.pixel_x + origin_x, y = fc.pixel_y + origin_y;
    if (!coherence->valid(y, x)) return std::nullopt;
    Eigen::Vector2d c = coherence->direction(x, y);
    if (c.dot(cx.lines()[line].direction) < 0.0) c = -c;
    return c;
  };

  PairCostOptions base;
  base.border_rules = false;
  Eigen::VectorXd costs(cx.num_pairs());
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    const LinePair& pr = cx.pairs()[p];
    const Index e1 = cx.lines()[pr.first].edge, e2 = cx.lines()[pr.second].edge;
    if (!damaged_side[e1] && !damaged_side[e2]) {
      // Flows on band and rim lines are fixed by the known intensities;
      // only their pairing could vary, and that is not ours to price.
      costs[p] = 0.0;
      continue;
    }
    PairCostOptions opts = base;
    if (band_face[e1] >= 0 && damaged_side[e2]) opts.first_direction = coherent(pr.first, band_face[e1]);
    else if (damaged_side[e1] && band_face[e2] >= 0) opts.second_direction = coherent(pr.second, band_face[e2]);
    costs[p] = pair_cost(cx, pr, params, opts);
  }
  return costs;
}

ComponentFill inpaint_component(const GrayImage& image, const DamagedComponent& component,
                                const CoherenceField* coherence, const InpaintOptions& options) {
  if (component.pixels.empty()) throw std::invalid_argument("inpaint_component: empty component");
  if (component.band.empty())
    throw std::invalid_argument("inpaint_component: damaged component has no known neighbours");
  ComponentFill fill;
  const double range = component.high - component.low;
  if (range <= 0.0) {
    fill.values.assign(component.pixels.size(), component.low);
    return fill;
  }

  int x0 = component.band[0].x, x1 = x0, y0 = component.band[0].y, y1 = y0;
  for (const auto* list : {&component.pixels, &component.band})
    for (const Pixel& p : *list) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  const CellComplex cx = build_complex(x1 - x0 + 1, y1 - y0 + 1, options.connectivity);

  InpaintDomain domain;
  domain.role.assign(static_cast<std::size_t>(cx.num_faces()), FaceRole::Inactive);
  domain.known = Eigen::VectorXd::Zero(cx.num_faces());
  domain.range = range;
  auto mark = [&](const Pixel& p, FaceRole role) {
    const Index first = cx.first_face_of_pixel(p.x - x0, p.y - y0);
    for (int k = 0; k < faces_per_pixel(options.connectivity); ++k) {
      domain.role[first + k] = role;
      if (role == FaceRole::Fixed) domain.known[first + k] = image(p.y, p.x) - component.low;
    }
  };
  for (const Pixel& p : component.pixels) mark(p, FaceRole::Free);
  for (const Pixel& p : component.band) mark(p, FaceRole::Fixed);

  const Eigen::VectorXd costs =
      inpaint_pair_costs(cx, domain.role, options.params, options.use_coherence ? coherence : nullptr, x0, y0);
  const ModelBundle bundle = build_inpaint_model(cx, domain, options.params, costs, false);
  const SegmentationResult res = segment_rounded(bundle.model, bundle.map, cx, 0.0, options.solver);
  if (res.status != SolveStatus::Optimal)
    throw std::runtime_error("inpaint_component: solver finished with status " + to_string(res.status));

  fill.energy = res.energy;
  fill.lower_bound = res.lower_bound;
  fill.relative_gap = res.relative_gap;
  fill.passes = res.passes;
  fill.fractional_count = res.fractional_count;
  fill.iterations = res.iterations;
  for (const Pixel& p : component.pixels) {
    const Index first = cx.first_face_of_pixel(p.x - x0, p.y - y0);
    double v = 0.0;
    for (int k = 0; k < faces_per_pixel(options.connectivity); ++k)
      v += cx.face_area(first + k) * res.face_values[first + k];
    fill.values.push_back(v + component.low);
  }
  return fill;
}

GrayImage assemble_output(const GrayImage& image, const DamageMask& mask,
                          const std::vector<DamagedComponent>& components, const std::vector<ComponentFill>& fills) {
  if (components.size() != fills.size()) throw std::invalid_argument("assemble_output: one fill per component expected");
  GrayImage out = image;
  DamageMask covered = DamageMask::Constant(image.rows(), image.cols(), false);
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (fills[k].values.size() != components[k].pixels.size())
      throw std::invalid_argument("assemble_output: fill size does not match its component");
    for (std::size_t i = 0; i < components[k].pixels.size(); ++i) {
      const Pixel& p = components[k].pixels[i];
      out(p.y, p.x) = fills[k].values[i];
      covered(p.y, p.x) = true;
    }
  }
  for (Eigen::Index y = 0; y < image.rows(); ++y)
    for (Eigen::Index x = 0; x < image.cols(); ++x)
      if (mask(y, x) && !covered(y, x)) throw std::invalid_argument("assemble_output: damaged pixel left uncovered");
  return out;
}

InpaintRun inpaint(const GrayImage& image, const DamageMask& mask, const InpaintOptions& options) {
  validate(options.params);
  InpaintRun run;
  run.components = damaged_components(image, mask);
  CoherenceField field;
  if (options.use_coherence) field = coherence_directions(image, mask, options.sigma, options.rho);
  for (const DamagedComponent& comp : run.components)
    run.fills.push_back(inpaint_component(image, comp, options.use_coherence ? &field : nullptr, options));
  run.output = assemble_output(image, mask, run.components, run.fills);
  return run;
}

}  // namespace curvcomplex

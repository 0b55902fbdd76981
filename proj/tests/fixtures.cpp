#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>

#ifndef CURVCOMPLEX_TEST_DATA
#define CURVCOMPLEX_TEST_DATA "tests/data"
#endif
#ifndef CURVCOMPLEX_TEST_GOLDEN
#define CURVCOMPLEX_TEST_GOLDEN "tests/golden"
#endif

namespace fixtures {

std::vector<Index> faces_around(const CellComplex& complex, LatticePoint node) {
  Index center = -1;
  for (Index v = 0; v < complex.num_vertices(); ++v)
    if (complex.vertices()[v] == node) center = v;
  if (center < 0) throw std::invalid_argument("faces_around: no such vertex");
  std::vector<std::pair<double, Index>> around;
  for (Index f = 0; f < complex.num_faces(); ++f) {
    const auto& ring = complex.faces()[f].ring;
    if (std::find(ring.begin(), ring.end(), center) == ring.end()) continue;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (Index v : ring) c += complex.position(v);
    c = c / static_cast<double>(ring.size()) - complex.position(center);
    around.emplace_back(std::atan2(c.y(), c.x()), f);
  }
  std::sort(around.begin(), around.end());
  std::vector<Index> out;
  for (const auto& [angle, f] : around) out.push_back(f);
  return out;
}

Index line_between(const CellComplex& complex, Index u, Index w) {
  for (Index l = 0; l < complex.num_lines(); ++l)
    if (complex.tail(l) == u && complex.head(l) == w) return l;
  return -1;
}

Index pair_through(const CellComplex& complex, Index a, Index v, Index b) {
  const Index l1 = line_between(complex, a, v);
  const Index l2 = line_between(complex, v, b);
  for (Index p = 0; p < complex.num_pairs(); ++p)
    if (complex.pairs()[p].first == l1 && complex.pairs()[p].second == l2) return p;
  return -1;
}

Eigen::VectorXd loop_assignment(const CellComplex& complex, const VariableMap& map, Index num_variables,
                                const std::vector<Index>& foreground, const std::vector<std::vector<Index>>& loops) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(num_variables);
  for (Index f : foreground) x[map.region[f]] = map.capacity;
  for (const auto& loop : loops) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Index p = pair_through(complex, loop[i], loop[(i + 1) % n], loop[(i + 2) % n]);
      if (p < 0 || map.pair[p] < 0) throw std::invalid_argument("loop_assignment: pair not in the model");
      x[map.pair[p]] += map.capacity;
    }
  }
  return x;
}

LinearModel without_rows(const LinearModel& model, Tag drop) {
  LinearModel out;
  for (Index j = 0; j < model.num_variables(); ++j)
    out.add_variable(model.cost(j), model.lower(j), model.upper(j), model.integral(j), model.variable_tag(j));
  for (Index r = 0; r < model.num_rows(); ++r) {
    if (model.row_tag(r).tag == drop) continue;
    out.add_row(model.row_columns(r), model.row_coefficients(r), model.relation(r), model.rhs(r), model.row_tag(r));
  }
  return out;
}

Gadget three_region_gadget() {
  Gadget g{build_complex(2, 2, Connectivity::Conn8), {}, {}};
  const auto around = faces_around(g.complex, {2, 2});
  g.data.region = Eigen::VectorXd::Constant(g.complex.num_faces(), 100.0);
  for (int k : {0, 2, 4}) {
    g.data.region[around[k]] = -100.0;
    g.foreground.push_back(around[k]);
  }
  return g;
}

LinearModel random_lp(std::mt19937_64& rng, int n, int m, bool feasible) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> coef(-3, 3);
  LinearModel lp;
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) {
    const double lo = unit(rng) < 0.3 ? -std::floor(3 * unit(rng)) : 0.0;
    const double up = lo + 1.0 + std::floor(4 * unit(rng));
    lp.add_variable(std::round(20 * (unit(rng) - 0.5)) / 4, lo, up, false, {Tag::Generic, j});
    x0[j] = lo + (up - lo) * unit(rng);
  }
  std::vector<Index> cols(n);
  for (int j = 0; j < n; ++j) cols[j] = j;
  for (int r = 0; r < m; ++r) {
    std::vector<double> a(n);
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      a[j] = coef(rng);
      act += a[j] * x0[j];
    }
    const bool equal = unit(rng) < 0.3;
    lp.add_row(cols, a, equal ? Relation::Equal : Relation::LessEqual, equal ? act : act + 2 * unit(rng),
               {Tag::Generic, r});
  }
  if (!feasible) {
    // x0 + x1 >= up0 + up1 + 1 written as a <= row
    const std::vector<double> a{-1.0, -1.0};
    lp.add_row(std::vector<Index>{0, 1}, a, Relation::LessEqual, -(lp.upper(0) + lp.upper(1) + 1.0),
               {Tag::Generic, m});
  }
  return lp;
}

LinearModel beale() {
  LinearModel lp;
  const double c[4] = {-0.75, 20.0, -0.5, 6.0};
  for (int j = 0; j < 4; ++j) lp.add_variable(c[j], 0.0, kInfinity, false, {Tag::Generic, j});
  const std::vector<Index> all{0, 1, 2, 3};
  lp.add_row(all, std::vector<double>{0.25, -8.0, -1.0, 9.0}, Relation::LessEqual, 0.0, {Tag::Generic, 0});
  lp.add_row(all, std::vector<double>{0.5, -12.0, -0.5, 3.0}, Relation::LessEqual, 0.0, {Tag::Generic, 1});
  lp.add_row(std::vector<Index>{2}, std::vector<double>{1.0}, Relation::LessEqual, 1.0, {Tag::Generic, 2});
  return lp;
}

GrayImage bar_with_gap() {
  GrayImage img = GrayImage::Zero(32, 32);
  for (int y = 4; y < 28; ++y) img(y, 16) = 255.0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> noise(60.0, 100.0);
  for (int y = 14; y < 17; ++y) img(y, 16) = std::round(noise(rng));
  return img;
}

Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> pixel_mask(const CellComplex& complex,
                                                                const std::vector<char>& face_label) {
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask(complex.height(), complex.width());
  for (int y = 0; y < complex.height(); ++y)
    for (int x = 0; x < complex.width(); ++x) {
      double area = 0.0;
      const Index first = complex.first_face_of_pixel(x, y);
      for (Index f = first; f < first + faces_per_pixel(complex.connectivity()); ++f)
        if (face_label[f]) area += complex.face_area(f);
      mask(y, x) = area > 0.5;
    }
  return mask;
}

int count_components8(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask) {
  Eigen::ArrayXXi seen = Eigen::ArrayXXi::Zero(mask.rows(), mask.cols());
  int count = 0;
  for (Eigen::Index y = 0; y < mask.rows(); ++y)
    for (Eigen::Index x = 0; x < mask.cols(); ++x) {
      if (!mask(y, x) || seen(y, x)) continue;
      ++count;
      std::queue<std::pair<Eigen::Index, Eigen::Index>> q;
      q.emplace(y, x);
      seen(y, x) = 1;
      while (!q.empty()) {
        const auto [cy, cx] = q.front();
        q.pop();
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const Eigen::Index ny = cy + dy, nx = cx + dx;
            if (ny < 0 || nx < 0 || ny >= mask.rows() || nx >= mask.cols()) continue;
            if (mask(ny, nx) && !seen(ny, nx)) {
              seen(ny, nx) = 1;
              q.emplace(ny, nx);
            }
          }
      }
    }
  return count;
}

std::string data_dir() { return CURVCOMPLEX_TEST_DATA; }
std::string golden_dir() { return CURVCOMPLEX_TEST_GOLDEN; }

}  // namespace fixtures

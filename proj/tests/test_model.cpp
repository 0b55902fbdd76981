#include "curvcomplex/model.hpp"
#include "curvcomplex/simplex.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace curvcomplex;

namespace {

// Region values from `label`, plus one pair per boundary node visit chosen
// by an arbitrary in/out matching.
Eigen::VectorXd explicit_completion(const CellComplex& cx, const VariableMap& map, Index nvars,
                                    const std::vector<char>& label) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nvars);
  for (Index f = 0; f < cx.num_faces(); ++f)
    if (label[f]) x[map.region[f]] = 1.0;
  std::map<std::array<Index, 3>, Index> pair_of;
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    const LinePair& pr = cx.pairs()[p];
    pair_of[{cx.tail(pr.first), pr.node, cx.head(pr.second)}] = p;
  }
  const auto segs = oracle::boundary_segments(oracle::geometry_of(cx), label);
  std::map<Index, std::pair<std::vector<Index>, std::vector<Index>>> at;
  for (const auto& [u, w] : segs) {
    at[w].first.push_back(u);
    at[u].second.push_back(w);
  }
  for (const auto& [v, io] : at) {
    REQUIRE(io.first.size() == io.second.size());
    for (std::size_t i = 0; i < io.first.size(); ++i) {
      const auto it = pair_of.find({io.first[i], v, io.second[i]});
      REQUIRE(it != pair_of.end());
      REQUIRE(map.pair[it->second] >= 0);
      x[map.pair[it->second]] += 1.0;
    }
  }
  return x;
}

std::vector<Index> chain(const std::vector<std::pair<int, int>>& segs) {
  std::map<int, int> next;
  for (const auto& [u, w] : segs) next[u] = w;
  std::vector<Index> loop{segs.front().first};
  while (next[loop.back()] != loop.front()) loop.push_back(next[loop.back()]);
  return loop;
}

}  // namespace

TEST_CASE("length model rows and the empty labeling") {
  const CellComplex cx = build_complex(3, 2, Connectivity::Conn8);
  DataCost d{Eigen::VectorXd::LinSpaced(cx.num_faces(), -1.0, 1.0), 0.0};
  const ModelBundle b = build_length_model(cx, d, 2.0);
  CHECK(b.model.num_rows() == cx.num_edges());
  CHECK(b.model.num_variables() == cx.num_faces() + cx.num_lines());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(b.model.num_variables());
  CHECK(b.model.max_row_violation(zero) == 0.0);
  CHECK(b.model.evaluate(zero) == 0.0);
  CHECK_THROWS(build_length_model(cx, d, -1.0));
}

TEST_CASE("every integral labeling of a 3x3 grid completes to a feasible point") {
  std::mt19937_64 rng(31);
  for (Connectivity c : {Connectivity::Conn8, Connectivity::Conn16}) {
    const CellComplex cx = build_complex(3, 3, c);
    DataCost d{Eigen::VectorXd::Zero(cx.num_faces()), 0.0};
    const ModelBundle b = build_curvature_model(cx, d, {});
    const int draws = c == Connectivity::Conn8 ? 40 : 8;
    for (int k = 0; k < draws; ++k) {
      std::vector<char> label(static_cast<std::size_t>(cx.num_faces()));
      for (auto& l : label) l = static_cast<char>(rng() & 1);
      const Eigen::VectorXd x = explicit_completion(cx, b.map, b.model.num_variables(), label);
      CHECK(b.model.max_row_violation(x) < 1e-12);
      CHECK(b.model.max_bound_violation(x) < 1e-12);
    }
  }
}

TEST_CASE("model objective equals the oracle cost of the completion") {
  const CellComplex cx = build_complex(2, 2, Connectivity::Conn8);
  EnergyParams params;
  params.nu = 0.3;
  params.lambda = 1.7;
  DataCost d{Eigen::VectorXd::Zero(cx.num_faces()), 0.0};
  const ModelBundle b = build_curvature_model(cx, d, params);
  const oracle::Geometry g = oracle::geometry_of(cx);
  const auto cost = oracle::geometric_cost(g, params, true);
  std::vector<char> label(16, 0);
  label[3] = label[4] = label[5] = 1;
  const Eigen::VectorXd x = explicit_completion(cx, b.map, b.model.num_variables(), label);
  double expected = 0.0;
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    if (b.map.pair[p] < 0 || x[b.map.pair[p]] == 0.0) continue;
    const LinePair& pr = cx.pairs()[p];
    expected += cost(cx.tail(pr.first), pr.node, cx.head(pr.second));
  }
  CHECK(b.model.evaluate(x) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("consistency rows exclude touching triangles") {
  const CellComplex cx = build_complex(1, 1, Connectivity::Conn8);
  DataCost d{Eigen::VectorXd::Zero(cx.num_faces()), 0.0};
  const ModelBundle b = build_curvature_model(cx, d, {});
  const LinearModel loose = fixtures::without_rows(b.model, Tag::Consistency);
  CHECK(loose.num_rows() == b.model.num_rows() - cx.num_edges());

  // two triangles of the pixel sharing an edge, each with its own loop
  const auto around = fixtures::faces_around(cx, {1, 1});
  const Index f = around[0], g = around[1];
  const auto ring = [&](Index face) {
    const auto& r = cx.faces()[face].ring;
    return std::vector<Index>(r.begin(), r.end());
  };
  const Eigen::VectorXd touching =
      fixtures::loop_assignment(cx, b.map, b.model.num_variables(), {f, g}, {ring(f), ring(g)});
  std::vector<char> label(4, 0);
  label[f] = label[g] = 1;
  const auto outer = chain(oracle::boundary_segments(oracle::geometry_of(cx), label));
  const Eigen::VectorXd desired = fixtures::loop_assignment(cx, b.map, b.model.num_variables(), {f, g}, {outer});

  CHECK(loose.max_row_violation(touching) < 1e-12);
  CHECK(b.model.max_row_violation(touching) == doctest::Approx(1.0));
  CHECK(loose.max_row_violation(desired) < 1e-12);
  CHECK(b.model.max_row_violation(desired) < 1e-12);
}

TEST_CASE("crossing rows") {
  const CellComplex cx = build_complex(2, 2, Connectivity::Conn8);
  DataCost d{Eigen::VectorXd::Zero(cx.num_faces()), 0.0};
  const ModelBundle plain = build_curvature_model(cx, d, {}, false);
  const ModelBundle crossed = build_curvature_model(cx, d, {}, true);
  CHECK(plain.map.crossings.size() == cx.crossings().size());
  CHECK(crossed.model.num_rows() == plain.model.num_rows() + static_cast<Index>(cx.crossings().size()));
  for (Index r = plain.model.num_rows(); r < crossed.model.num_rows(); ++r) {
    CHECK(crossed.model.row_tag(r).tag == Tag::Crossing);
    CHECK(crossed.model.rhs(r) == 1.0);
  }
}

TEST_CASE("inpainting model scales capacities and fixes known faces") {
  const CellComplex cx = build_complex(3, 3, Connectivity::Conn8);
  InpaintDomain dom;
  dom.role.assign(static_cast<std::size_t>(cx.num_faces()), FaceRole::Fixed);
  dom.known = Eigen::VectorXd::Constant(cx.num_faces(), 7.0);
  dom.range = 10.0;
  for (Index f = cx.first_face_of_pixel(1, 1); f < cx.first_face_of_pixel(1, 1) + 4; ++f) dom.role[f] = FaceRole::Free;
  dom.role[cx.first_face_of_pixel(0, 0)] = FaceRole::Inactive;
  const ModelBundle b = build_inpaint_model(cx, dom, {});
  CHECK(b.map.capacity == 10.0);
  CHECK(b.map.region[cx.first_face_of_pixel(0, 0)] == -1);
  for (Index f = 0; f < cx.num_faces(); ++f) {
    if (b.map.region[f] < 0) continue;
    const Index v = b.map.region[f];
    if (dom.role[f] == FaceRole::Fixed) {
      CHECK(b.model.lower(v) == 7.0);
      CHECK(b.model.upper(v) == 7.0);
    } else {
      CHECK(b.model.upper(v) == 10.0);
    }
    CHECK(b.model.cost(v) == 0.0);
  }
  for (Index r = 0; r < b.model.num_rows(); ++r)
    if (b.model.row_tag(r).tag == Tag::Consistency || b.model.row_tag(r).tag == Tag::Crossing)
      CHECK(b.model.rhs(r) == 10.0);

  // constant surroundings: filling with the constant costs nothing
  const LPSolution s = solve(b.model);
  REQUIRE(s.optimal());
  CHECK(std::abs(s.objective) < 1e-9);

  dom.role.assign(dom.role.size(), FaceRole::Free);
  CHECK_THROWS_AS(build_inpaint_model(cx, dom, {}), std::invalid_argument);
}

TEST_CASE("seeds fix region bounds") {
  const CellComplex cx = build_complex(2, 1, Connectivity::Conn8);
  DataCost d{Eigen::VectorXd::Zero(cx.num_faces()), 0.0};
  const ModelBundle b = build_curvature_model(cx, d, {});
  SeedMask seeds(1, 2);
  seeds << Seed::Foreground, Seed::Background;
  const LinearModel m = fix_seeds(b.model, b.map, cx, seeds);
  for (Index f = 0; f < cx.num_faces(); ++f) {
    const double v = cx.faces()[f].pixel_x == 0 ? 1.0 : 0.0;
    CHECK(m.lower(b.map.region[f]) == v);
    CHECK(m.upper(b.map.region[f]) == v);
  }
  CHECK_THROWS(fix_seeds(b.model, b.map, cx, SeedMask::Constant(2, 2, Seed::None)));
}

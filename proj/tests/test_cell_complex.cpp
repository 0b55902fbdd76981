#include "curvcomplex/cell_complex.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace curvcomplex;

namespace {

std::set<std::array<int, 3>> library_pairs(const CellComplex& cx) {
  std::set<std::array<int, 3>> out;
  for (const LinePair& p : cx.pairs()) out.insert({cx.tail(p.first), p.node, cx.head(p.second)});
  return out;
}

}  // namespace

TEST_CASE("Euler characteristic and areas") {
  for (Connectivity c : {Connectivity::Conn8, Connectivity::Conn16}) {
    for (auto [w, h] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{4, 2}}) {
      const CellComplex cx = build_complex(w, h, c);
      CAPTURE(w);
      CAPTURE(h);
      CHECK(cx.num_vertices() - cx.num_edges() + cx.num_faces() == 1);
      CHECK(cx.num_faces() == w * h * faces_per_pixel(c));
      double total = 0.0;
      for (Index f = 0; f < cx.num_faces(); ++f) {
        CHECK(cx.faces()[f].twice_area > 0);
        total += cx.face_area(f);
      }
      CHECK(total == doctest::Approx(w * h).epsilon(1e-12));
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          double a = 0.0;
          for (const Face& f : cx.pixel_faces(x, y)) a += static_cast<double>(f.twice_area);
          CHECK(a == doctest::Approx(2.0 * cx.scale() * cx.scale()));
        }
    }
  }
}

TEST_CASE("edge incidences follow the face rings") {
  const CellComplex cx = build_complex(3, 2, Connectivity::Conn16);
  std::vector<int> uses(static_cast<std::size_t>(cx.num_edges()), 0);
  for (Index f = 0; f < cx.num_faces(); ++f) {
    const Face& face = cx.faces()[f];
    for (std::size_t i = 0; i < face.edges.size(); ++i) {
      const Index e = face.edges[i];
      CHECK(cx.incidence_region(e, f) == face.signs[i]);
      ++uses[e];
    }
  }
  for (Index e = 0; e < cx.num_edges(); ++e) {
    const Edge& edge = cx.edges()[e];
    CHECK(uses[e] == (edge.on_border ? 1 : 2));
    CHECK((edge.negative_face < 0 || edge.positive_face < 0) == edge.on_border);
    CHECK(cx.incidence_line(e, cx.line_of(e, +1)) == 1);
    CHECK(cx.incidence_line(e, cx.line_of(e, -1)) == -1);
  }
  for (Index p = 0; p < cx.num_pairs(); ++p) {
    const Index e = cx.lines()[cx.pairs()[p].first].edge;
    CHECK(cx.incidence_pair(e, p) == cx.incidence_line(e, cx.pairs()[p].first));
  }
}

TEST_CASE("1x1 Conn8 mesh matches the golden dump") {
  const CellComplex cx = build_complex(1, 1, Connectivity::Conn8);
  std::ostringstream out;
  write_mesh(cx, out);
  std::ifstream golden(fixtures::golden_dir() + "/mesh_1x1_conn8.txt");
  REQUIRE(golden.good());
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(out.str() == expected.str());
  // 12 ordered pairs at the center, 3 at each corner; straight N-S pairs
  // cross straight E-W pairs.
  CHECK(cx.num_pairs() == 24);
  CHECK(cx.crossings().size() == 4);
}

TEST_CASE("pair enumeration agrees with a brute-force segment scan") {
  for (Connectivity c : {Connectivity::Conn8, Connectivity::Conn16}) {
    for (auto [w, h] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
      const CellComplex cx = build_complex(w, h, c);
      const auto scanned = oracle::scan_pairs(oracle::geometry_of(cx));
      const std::set<std::array<int, 3>> expected(scanned.begin(), scanned.end());
      CHECK(expected.size() == scanned.size());
      CHECK(library_pairs(cx) == expected);
      CHECK(static_cast<std::size_t>(cx.num_pairs()) == expected.size());
    }
  }
}

TEST_CASE("crossings agree with a sector test on the polylines") {
  for (Connectivity c : {Connectivity::Conn8, Connectivity::Conn16}) {
    const CellComplex cx = build_complex(2, 2, c);
    const oracle::Geometry g = oracle::geometry_of(cx);
    std::map<Index, std::vector<Index>> by_node;
    for (Index p = 0; p < cx.num_pairs(); ++p) by_node[cx.pairs()[p].node].push_back(p);
    std::set<std::pair<Index, Index>> expected;
    for (const auto& [v, list] : by_node)
      for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          const LinePair& p = cx.pairs()[list[i]];
          const LinePair& q = cx.pairs()[list[j]];
          if (oracle::polylines_cross(g, v, cx.tail(p.first), cx.head(p.second), cx.tail(q.first),
                                      cx.head(q.second)))
            expected.insert({std::min(list[i], list[j]), std::max(list[i], list[j])});
        }
    const std::set<std::pair<Index, Index>> got(cx.crossings().begin(), cx.crossings().end());
    CHECK(got == expected);
  }
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(build_complex(0, 3, Connectivity::Conn8), std::invalid_argument);
  CHECK_THROWS_AS(build_complex(3, -1, Connectivity::Conn16), std::invalid_argument);
}

TEST_CASE("border and corner flags") {
  const CellComplex cx = build_complex(2, 2, Connectivity::Conn8);
  int corners = 0;
  for (Index v = 0; v < cx.num_vertices(); ++v) corners += cx.is_domain_corner(v) ? 1 : 0;
  CHECK(corners == 4);
  int border = 0;
  for (const Edge& e : cx.edges()) border += e.on_border ? 1 : 0;
  CHECK(border == 8);
}

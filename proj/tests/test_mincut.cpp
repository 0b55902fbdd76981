#include "curvcomplex/mincut.hpp"
#include "curvcomplex/model.hpp"
#include "curvcomplex/simplex.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace curvcomplex;

TEST_CASE("Edmonds-Karp agrees with brute-force cuts") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> cap(0.0, 5.0);
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + static_cast<int>(rng() % 11);
    FlowNetwork net(n);
    for (int u = 0; u < n; ++u) {
      net.add_terminal(u, rng() % 3 ? cap(rng) : 0.0, rng() % 3 ? cap(rng) : 0.0);
      for (int v = u + 1; v < n; ++v)
        if (rng() % 3 == 0) net.add_arc(u, v, cap(rng), cap(rng));
    }
    const CutResult cut = min_cut(net);
    CHECK(cut.value == doctest::Approx(oracle::brute_force_cut(net)).epsilon(1e-12));
    // the reported side realises the value
    double realised = 0.0;
    const auto& adj = net.adjacency();
    auto side = [&](int u) { return u == net.source() ? true : u == net.sink() ? false : cut.source_side[u] != 0; };
    for (int u = 0; u < n + 2; ++u)
      for (const auto& a : adj[u])
        if (side(u) && !side(a.to)) realised += a.cap;
    CHECK(realised == doctest::Approx(cut.value).epsilon(1e-12));
  }
}

TEST_CASE("network cut plus constant equals the labeling energy") {
  const CellComplex cx = build_complex(3, 2, Connectivity::Conn8);
  const oracle::Geometry g = oracle::geometry_of(cx);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> cost(0.0, 1.0);
  DataCost d{Eigen::VectorXd(cx.num_faces()), 0.0};
  for (Index f = 0; f < cx.num_faces(); ++f) d.region[f] = cost(rng);
  const double nu = 0.7;
  const FlowNetwork net = build_network(cx, d, nu);
  for (int k = 0; k < 20; ++k) {
    std::vector<char> label(static_cast<std::size_t>(cx.num_faces()));
    for (auto& l : label) l = static_cast<char>(rng() & 1);
    double energy = 0.0;
    for (Index f = 0; f < cx.num_faces(); ++f)
      if (label[f]) energy += d.region[f];
    for (const auto& [u, w] : oracle::boundary_segments(g, label)) {
      const double dx = static_cast<double>(g.vertex[w][0] - g.vertex[u][0]);
      const double dy = static_cast<double>(g.vertex[w][1] - g.vertex[u][1]);
      energy += nu * std::hypot(dx, dy) / g.scale;
    }
    double cut = net.constant;
    const auto& adj = net.adjacency();
    auto side = [&](int u) { return u == net.source() ? true : u == net.sink() ? false : label[u] != 0; };
    for (int u = 0; u < net.num_nodes() + 2; ++u)
      for (const auto& a : adj[u])
        if (side(u) && !side(a.to)) cut += a.cap;
    CHECK(cut == doctest::Approx(energy).epsilon(1e-12));
  }
}

TEST_CASE("length-model LP equals the min cut") {
  std::mt19937_64 rng(100);
  std::normal_distribution<double> cost(0.0, 1.0);
  const CellComplex cx = build_complex(3, 3, Connectivity::Conn8);
  for (double nu : {0.1, 1.0, 10.0}) {
    DataCost d{Eigen::VectorXd(cx.num_faces()), 0.0};
    for (Index f = 0; f < cx.num_faces(); ++f) d.region[f] = cost(rng);
    const FlowNetwork net = build_network(cx, d, nu);
    const CutResult cut = min_cut(net);
    const LPSolution lp = solve(build_length_model(cx, d, nu).model);
    REQUIRE(lp.optimal());
    CHECK(lp.objective == doctest::Approx(cut.value + net.constant).epsilon(1e-9));
  }
}

#include "curvcomplex/mincut.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace curvcomplex {

FlowNetwork::FlowNetwork(int nodes) : nodes_(nodes), adj_(static_cast<std::size_t>(nodes) + 2) {
  if (nodes < 0) throw std::invalid_argument("flow network: negative node count");
}

void FlowNetwork::add_arc(int u, int v, double cap, double reverse_cap) {
  if (u < 0 || v < 0 || u >= nodes_ + 2 || v >= nodes_ + 2 || u == v)
    throw std::invalid_argument("flow network: bad arc endpoints");
  if (!(cap >= 0.0) || !(reverse_cap >= 0.0)) throw std::invalid_argument("flow network: negative capacity");
  const int iu = static_cast<int>(adj_[u].size());
  const int iv = static_cast<int>(adj_[v].size());
  adj_[u].push_back({v, cap, iv});
  adj_[v].push_back({u, reverse_cap, iu});
}

void FlowNetwork::add_terminal(int u, double from_source, double to_sink) {
  if (from_source > 0.0) add_arc(source(), u, from_source);
  if (to_sink > 0.0) add_arc(u, sink(), to_sink);
}

FlowNetwork build_network(const CellComplex& cx, const DataCost& data, double nu) {
  if (data.region.size() != cx.num_faces()) throw std::invalid_argument("build_network: data cost size mismatch");
  if (!(nu >= 0.0)) throw std::invalid_argument("build_network: nu must be >= 0");
  FlowNetwork net(cx.num_faces());
  Eigen::VectorXd fg = data.region;
  for (const Edge& e : cx.edges()) {
    const double w = nu * e.length;
    if (e.positive_face >= 0 && e.negative_face >= 0) {
      if (w > 0.0) net.add_arc(e.positive_face, e.negative_face, w, w);
    } else {
      fg[e.positive_face >= 0 ? e.positive_face : e.negative_face] += w;
    }
  }
  for (Index f = 0; f < cx.num_faces(); ++f) {
    if (fg[f] >= 0.0) {
      net.add_terminal(f, 0.0, fg[f]);
    } else {
      net.add_terminal(f, -fg[f], 0.0);
      net.constant += fg[f];
    }
  }
  return net;
}

CutResult min_cut(const FlowNetwork& network) {
  auto adj = network.adjacency();
  const int s = network.source(), t = network.sink();
  const int total = network.num_nodes() + 2;
  CutResult out;
  std::vector<int> parent_node(static_cast<std::size_t>(total)), parent_arc(static_cast<std::size_t>(total));
  std::deque<int> queue;
  // Residual capacities below this are treated as saturated.
  double cap_sum = 0.0;
  for (const auto& arcs : adj)
    for (const auto& a : arcs) cap_sum += a.cap;
  const double eps = 1e-12 * std::max(1.0, cap_sum);

  while (true) {
    std::fill(parent_node.begin(), parent_node.end(), -1);
    parent_node[s] = s;
    queue.assign(1, s);
    while (!queue.empty() && parent_node[t] < 0) {
      const int u = queue.front();
      queue.pop_front();
      for (int k = 0; k < static_cast<int>(adj[u].size()); ++k) {
        const auto& a = adj[u][k];
        if (a.cap > eps && parent_node[a.to] < 0) {
          parent_node[a.to] = u;
          parent_arc[a.to] = k;
          queue.push_back(a.to);
        }
      }
    }
    if (parent_node[t] < 0) break;
    double push = std::numeric_limits<double>::infinity();
    for (int v = t; v != s; v = parent_node[v]) push = std::min(push, adj[parent_node[v]][parent_arc[v]].cap);
    for (int v = t; v != s; v = parent_node[v]) {
      auto& a = adj[parent_node[v]][parent_arc[v]];
      a.cap -= push;
      adj[v][a.rev].cap += push;
    }
    out.value += push;
  }
  out.source_side.assign(static_cast<std::size_t>(network.num_nodes()), 0);
  for (int v = 0; v < network.num_nodes(); ++v) out.source_side[v] = parent_node[v] >= 0 ? 1 : 0;
  return out;
}

}  // namespace curvcomplex

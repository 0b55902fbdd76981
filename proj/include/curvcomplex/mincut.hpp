// Length-only graph-cut baseline on the basic regions of a cell complex.

#pragma once

#include "curvcomplex/cell_complex.hpp"
#include "curvcomplex/energy.hpp"

#include <vector>

namespace curvcomplex {

class FlowNetwork {
 public:
  /// `nodes` regular nodes plus a source and a sink.
  explicit FlowNetwork(int nodes = 0);

  int num_nodes() const { return nodes_; }
  int source() const { return nodes_; }
  int sink() const { return nodes_ + 1; }

  /// Adds u -> v with capacity `cap` and v -> u with `reverse_cap`.
  void add_arc(int u, int v, double cap, double reverse_cap = 0.0);
  /// Adds to the terminal arcs of node u: source -> u and u -> sink.
  void add_terminal(int u, double from_source, double to_sink);

  /// Constant added to every cut value to recover the segmentation energy.
  double constant = 0.0;

  struct Arc {
    int to;
    double cap;
    int rev;  // index of the paired arc in adj_[to]
  };
  const std::vector<std::vector<Arc>>& adjacency() const { return adj_; }

 private:
  int nodes_ = 0;
  std::vector<std::vector<Arc>> adj_;
};

struct CutResult {
  double value = 0.0;             // capacity of the minimum cut
  std::vector<char> source_side;  // per regular node
};

/// Node f is face f; source side means foreground. Neighboring faces are
/// linked by nu * length(shared edge); domain-border edges charge their
/// length to the face's foreground label. Energy of a labeling equals
/// cut value + network.constant.
FlowNetwork build_network(const CellComplex& complex, const DataCost& data, double nu);

/// Exact max-flow / min-cut by shortest augmenting paths (Edmonds-Karp).
CutResult min_cut(const FlowNetwork& network);

}  // namespace curvcomplex

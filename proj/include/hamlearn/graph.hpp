#pragma once

#include <utility>
#include <vector>

#include "hamlearn/errors.hpp"

namespace hamlearn {

/// Directed graph underlying the network: vertices 1..n (1-based at the API
/// boundary, 0-based internally), the first d vertices are inputs and may not
/// have incoming arcs, every input must feed at least one non-input vertex.
/// Weights live on arcs; the flat weight order is non-input vertices in
/// ascending order, parents ascending within each vertex.
class NetGraph {
 public:
  /// Vertices in `arcs` and `outputs` are 1-based, matching the usual
  /// digraph notation. Throws StructureError / IndexError on violations.
  static NetGraph build(int n, int d, const std::vector<std::pair<int, int>>& arcs,
                        const std::vector<int>& outputs);

  /// All arcs among non-input vertices (self-loops included) plus an arc from
  /// every input to every non-input vertex. Output set defaults to the last
  /// vertex.
  static NetGraph fully_connected(int n, int d);

  int vertex_count() const { return n_; }
  int input_count() const { return d_; }
  int state_size() const { return n_ - d_; }
  int weight_count() const { return static_cast<int>(arc_order_.size()); }

  bool is_input(int v) const { return v < d_; }

  /// Parents / children of 0-based vertex v, sorted ascending.
  const std::vector<int>& parents(int v) const { return parents_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }

  /// 0-based output vertices, sorted.
  const std::vector<int>& outputs() const { return outputs_; }
  bool is_output(int v) const { return is_output_[v]; }

  /// Flat weight index of arc (from -> to), both 0-based. -1 if absent.
  int arc_index(int from, int to) const;

  /// Arcs in flat weight order as (from, to), 0-based.
  const std::vector<std::pair<int, int>>& arcs() const { return arc_order_; }

  /// Index of vertex v within the state vector (v must be non-input).
  int state_index(int v) const { return v - d_; }
  int state_vertex(int k) const { return k + d_; }

 private:
  NetGraph() = default;

  int n_ = 0;
  int d_ = 0;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<int> outputs_;
  std::vector<char> is_output_;
  std::vector<std::pair<int, int>> arc_order_;
  std::vector<int> weight_offset_;  // per vertex, start of its w_{i*} block
};

/// Lemma-8 self check: the arc set enumerated as "non-input vertices times
/// their parents" equals the arc set enumerated as "all vertices times their
/// children".
bool switch_sums_check(const NetGraph& g);

}  // namespace hamlearn

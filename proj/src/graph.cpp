#include "hamlearn/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace hamlearn {

NetGraph NetGraph::build(int n, int d, const std::vector<std::pair<int, int>>& arcs,
                         const std::vector<int>& outputs) {
  if (n <= 0 || d <= 0 || d >= n) {
    throw StructureError("need 0 < d < n, got n=" + std::to_string(n) +
                         " d=" + std::to_string(d));
  }

  NetGraph g;
  g.n_ = n;
  g.d_ = d;
  g.parents_.assign(n, {});
  g.children_.assign(n, {});
  g.is_output_.assign(n, 0);

  std::set<std::pair<int, int>> seen;
  for (auto [j1, i1] : arcs) {
    if (j1 < 1 || j1 > n || i1 < 1 || i1 > n) {
      throw IndexError("arc (" + std::to_string(j1) + "," + std::to_string(i1) +
                       ") references a vertex outside 1.." + std::to_string(n));
    }
    int j = j1 - 1, i = i1 - 1;
    if (i < d) {
      throw StructureError("input vertex " + std::to_string(i1) +
                           " has an incoming arc from " + std::to_string(j1));
    }
    if (!seen.insert({j, i}).second) {
      throw StructureError("duplicate arc (" + std::to_string(j1) + "," +
                           std::to_string(i1) + ")");
    }
    g.parents_[i].push_back(j);
    g.children_[j].push_back(i);
  }

  for (int v = 0; v < d; ++v) {
    bool feeds_hidden = false;
    for (int c : g.children_[v]) {
      if (c >= d) feeds_hidden = true;
    }
    if (!feeds_hidden) {
      throw StructureError("input vertex " + std::to_string(v + 1) +
                           " has no outgoing arc into a non-input vertex");
    }
  }

  if (outputs.empty()) throw StructureError("output set is empty");
  std::set<int> out;
  for (int o1 : outputs) {
    if (o1 < 1 || o1 > n) {
      throw IndexError("output vertex " + std::to_string(o1) + " out of range");
    }
    if (o1 <= d) {
      throw StructureError("output vertex " + std::to_string(o1) +
                           " is an input vertex");
    }
    out.insert(o1 - 1);
  }
  g.outputs_.assign(out.begin(), out.end());
  for (int o : g.outputs_) g.is_output_[o] = 1;

  for (int v = 0; v < n; ++v) {
    std::sort(g.parents_[v].begin(), g.parents_[v].end());
    std::sort(g.children_[v].begin(), g.children_[v].end());
  }

  g.weight_offset_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    g.weight_offset_[v + 1] = g.weight_offset_[v] + static_cast<int>(g.parents_[v].size());
    for (int p : g.parents_[v]) g.arc_order_.push_back({p, v});
  }
  return g;
}

NetGraph NetGraph::fully_connected(int n, int d) {
  std::vector<std::pair<int, int>> arcs;
  for (int u = 1; u <= d; ++u) {
    for (int v = d + 1; v <= n; ++v) arcs.push_back({u, v});
  }
  for (int u = d + 1; u <= n; ++u) {
    for (int v = d + 1; v <= n; ++v) arcs.push_back({u, v});
  }
  return build(n, d, arcs, {n});
}

int NetGraph::arc_index(int from, int to) const {
  const auto& pa = parents_[to];
  auto it = std::lower_bound(pa.begin(), pa.end(), from);
  if (it == pa.end() || *it != from) return -1;
  return weight_offset_[to] + static_cast<int>(it - pa.begin());
}

bool switch_sums_check(const NetGraph& g) {
  std::set<std::pair<int, int>> by_parents;
  for (int k = g.input_count(); k < g.vertex_count(); ++k) {
    for (int m : g.parents(k)) by_parents.insert({m, k});
  }
  std::set<std::pair<int, int>> by_children;
  for (int m = 0; m < g.vertex_count(); ++m) {
    for (int k : g.children(m)) by_children.insert({m, k});
  }
  return by_parents == by_children;
}

}  // namespace hamlearn

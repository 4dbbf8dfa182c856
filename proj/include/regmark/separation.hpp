#pragma once

#include <nlohmann/json.hpp>

#include <deque>
#include <vector>

#include "graph.hpp"
#include "statements.hpp"

namespace regmark {

namespace detail {

struct HalfEdge {
  int to;
  bool head_here;  // arrowhead at the node owning this list
  bool head_there;  // arrowhead at `to`
};

inline std::vector<std::vector<HalfEdge>> mark_adjacency(
    const RegressionGraph& g) {
  std::vector<std::vector<HalfEdge>> adj(g.node_count() + 1);
  for (const Edge& e : g.edges()) {
    switch (e.type) {
      case EdgeType::Arrow:  // points to b from a
        adj[e.a].push_back({e.b, false, true});
        adj[e.b].push_back({e.a, true, false});
        break;
      case EdgeType::Dashed:
        adj[e.a].push_back({e.b, true, true});
        adj[e.b].push_back({e.a, true, true});
        break;
      case EdgeType::Full:
        adj[e.a].push_back({e.b, false, false});
        adj[e.b].push_back({e.a, false, false});
        break;
    }
  }
  return adj;
}

}  // namespace detail

struct SeparationResult {
  bool separated;
  std::vector<int> witness;  // a connecting walk when not separated

  explicit operator bool() const { return separated; }
};

// Path-based global Markov criterion: A and B are separated by C when no
// path is rendered connecting, where an inner node with arrowheads on both
// incident edges (a collider) is open iff it lies in C or ant(C), and any
// other inner node is open iff it lies outside C. Implemented as
// reachability over (node, entering-mark) states; a connecting walk found
// this way always contains a connecting path.
inline SeparationResult m_separated(const RegressionGraph& g, NodeSet A,
                                    NodeSet B, NodeSet C) {
  if (!A.subset_of(g.nodes()) || !B.subset_of(g.nodes()) ||
      !C.subset_of(g.nodes()))
    throw GraphError("separation query mentions unknown nodes");
  if (!A.disjoint_with(B) || !A.disjoint_with(C) || !B.disjoint_with(C))
    throw GraphError("separation query sets must be disjoint");
  if (A.empty() || B.empty()) return {true, {}};

  auto adj = detail::mark_adjacency(g);
  NodeSet collider_open = C | ant_of_set(g, C);

  const int d = g.node_count();
  // state = (node, entered with arrowhead at node)
  std::vector<std::array<int, 2>> pred(d + 1, {0, 0});  // 0 = unvisited
  auto encode = [](int node, bool h) { return h ? -node : node; };
  std::deque<int> queue;

  auto visit = [&](int node, bool h, int from_state) -> bool {
    int& slot = pred[node][h];
    if (slot != 0) return false;
    slot = from_state;
    queue.push_back(encode(node, h));
    return true;
  };

  auto build_witness = [&](int state) {
    std::vector<int> walk;
    while (state != 0) {
      int node = std::abs(state);
      walk.push_back(node);
      if (A.contains(node)) break;
      state = pred[node][state < 0];
    }
    std::reverse(walk.begin(), walk.end());
    return walk;
  };

  std::vector<int> sources = A.to_vector();
  for (int a : sources) {
    const int source_tag = encode(a, false);
    pred[a][0] = pred[a][1] = source_tag;  // never re-entered usefully
    for (const auto& e : adj[a]) {
      if (visit(e.to, e.head_there, source_tag) && B.contains(e.to))
        return {false, build_witness(encode(e.to, e.head_there))};
    }
  }

  while (!queue.empty()) {
    int state = queue.front();
    queue.pop_front();
    int t = std::abs(state);
    bool entered_head = state < 0;
    if (B.contains(t) || A.contains(t)) continue;
    for (const auto& e : adj[t]) {
      bool collider = entered_head && e.head_here;
      bool open = collider ? collider_open.contains(t) : !C.contains(t);
      if (!open) continue;
      if (visit(e.to, e.head_there, state) && B.contains(e.to))
        return {false, build_witness(encode(e.to, e.head_there))};
    }
  }
  return {true, {}};
}

struct SoundnessFailure {
  IndependenceStatement statement;
  std::vector<int> witness;
};

struct SoundnessReport {
  Property property;
  int total = 0;
  std::vector<SoundnessFailure> failures;

  bool ok() const { return failures.empty(); }
};

// Checks every pairwise statement against the separation criterion; a
// nonempty failure list indicates an implementation (or fixture) bug.
inline SoundnessReport verify_soundness(const RegressionGraph& g,
                                        const ComponentOrdering& ord,
                                        Property p) {
  SoundnessReport report{p};
  for (const auto& st : pairwise_statements(g, ord, p)) {
    ++report.total;
    auto res = m_separated(g, st.A, st.B, st.C);
    if (!res.separated) report.failures.push_back({st, res.witness});
  }
  return report;
}

inline nlohmann::json soundness_to_json(const SoundnessReport& r) {
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : r.failures)
    fails.push_back({{"A", f.statement.A.to_vector()},
                     {"B", f.statement.B.to_vector()},
                     {"C", f.statement.C.to_vector()},
                     {"witness", f.witness}});
  return {{"property", property_name(r.property)},
          {"total", r.total},
          {"failures", fails}};
}

}  // namespace regmark

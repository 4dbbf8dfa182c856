#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "regmark/parse.hpp"
#include "regmark/random.hpp"
#include "regmark/separation.hpp"

#ifndef REGMARK_FIXTURE_DIR
#define REGMARK_FIXTURE_DIR "fixtures"
#endif

namespace regmark::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline RegressionGraph figure1() {
  return parse_graph(read_file(std::string(REGMARK_FIXTURE_DIR) + "/figure1.rg"));
}

// Arrow-only regression graph (a DAG with singleton components).
inline RegressionGraph random_dag(int n, std::uint64_t seed, double p = 0.4) {
  Rng rng(seed);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i + 1;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  std::vector<Edge> edges;
  for (int lo = 0; lo < n; ++lo)
    for (int hi = lo + 1; hi < n; ++hi)
      if (rng.chance(p)) edges.push_back({EdgeType::Arrow, perm[hi], perm[lo]});
  return RegressionGraph(n, std::move(edges));
}

// Test oracle: enumerate all simple paths and apply the collider rule
// directly. Exponential, for small graphs only.
inline bool separated_by_enumeration(const RegressionGraph& g, NodeSet A,
                                     NodeSet B, NodeSet C) {
  auto adj = detail::mark_adjacency(g);
  NodeSet collider_open = C | ant_of_set(g, C);
  bool connected = false;
  std::vector<bool> on_path(g.node_count() + 1, false);

  // `node` is the current end of the simple path; it must be open as an
  // inner node before the path may continue, except at the start.
  auto dfs = [&](auto&& self, int node, bool head_in, bool is_start) -> void {
    if (connected) return;
    for (const auto& e : adj[node]) {
      if (connected) return;
      if (on_path[e.to]) continue;
      if (!is_start) {
        bool collider = head_in && e.head_here;
        bool open = collider ? collider_open.contains(node) : !C.contains(node);
        if (!open) continue;
      }
      if (B.contains(e.to)) {
        connected = true;
        return;
      }
      if (A.contains(e.to)) continue;  // a suffix path would also connect
      on_path[e.to] = true;
      self(self, e.to, e.head_there, false);
      on_path[e.to] = false;
    }
  };

  A.for_each([&](int a) {
    if (connected) return;
    on_path[a] = true;
    dfs(dfs, a, false, true);
    on_path[a] = false;
  });
  return !connected;
}

}  // namespace regmark::testing

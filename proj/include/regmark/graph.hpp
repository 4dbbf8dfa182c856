#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "node_set.hpp"

namespace regmark {

enum class EdgeType { Arrow, Dashed, Full };

// Arrow: points to b from a (a is a parent of b).
// Dashed/Full: unordered, normalized a < b.
struct Edge {
  EdgeType type;
  int a;
  int b;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend bool operator<(const Edge& x, const Edge& y) {
    return std::tie(x.type, x.a, x.b) < std::tie(y.type, y.a, y.b);
  }
};

inline const char* edge_type_name(EdgeType t) {
  switch (t) {
    case EdgeType::Arrow: return "arrow";
    case EdgeType::Dashed: return "dashed";
    case EdgeType::Full: return "full";
  }
  return "?";
}

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mixed graph over nodes 1..d with arrows, dashed lines and full lines.
// Construction enforces only simple-graph syntax (no self-loops, at most
// one edge per pair); the regression-graph constraints are reported by
// validate().
class RegressionGraph {
 public:
  RegressionGraph() = default;

  RegressionGraph(int node_count, std::vector<Edge> edges,
                  std::optional<NodeSet> context_decl = std::nullopt)
      : d_(node_count), context_decl_(context_decl) {
    if (node_count < 0 || node_count > 64)
      throw GraphError("node count out of range: " + std::to_string(node_count));
    parents_.assign(d_ + 1, NodeSet());
    children_.assign(d_ + 1, NodeSet());
    dashed_.assign(d_ + 1, NodeSet());
    full_.assign(d_ + 1, NodeSet());
    for (Edge e : edges) {
      if (e.type != EdgeType::Arrow && e.a > e.b) std::swap(e.a, e.b);
      check_node(e.a);
      check_node(e.b);
      if (e.a == e.b)
        throw GraphError("self-loop at node " + std::to_string(e.a));
      int lo = std::min(e.a, e.b), hi = std::max(e.a, e.b);
      if (pair_coupled(lo, hi))
        throw GraphError("duplicate edge for pair " + std::to_string(lo) + "," +
                         std::to_string(hi));
      switch (e.type) {
        case EdgeType::Arrow:
          parents_[e.b].add(e.a);
          children_[e.a].add(e.b);
          break;
        case EdgeType::Dashed:
          dashed_[e.a].add(e.b);
          dashed_[e.b].add(e.a);
          break;
        case EdgeType::Full:
          full_[e.a].add(e.b);
          full_[e.b].add(e.a);
          break;
      }
      edges_.push_back(e);
    }
    if (context_decl_) {
      context_decl_->for_each([&](int i) { check_node(i); });
    }
    std::sort(edges_.begin(), edges_.end());
  }

  int node_count() const { return d_; }
  NodeSet nodes() const { return NodeSet::full(d_); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::optional<NodeSet>& context_decl() const { return context_decl_; }

  NodeSet parents(int i) const { return at(parents_, i); }
  NodeSet children(int i) const { return at(children_, i); }
  NodeSet dashed_neighbours(int i) const { return at(dashed_, i); }
  NodeSet full_neighbours(int i) const { return at(full_, i); }
  NodeSet undirected_neighbours(int i) const {
    return at(dashed_, i) | at(full_, i);
  }

  bool coupled(int i, int j) const {
    return parents_[i].contains(j) || parents_[j].contains(i) ||
           dashed_[i].contains(j) || full_[i].contains(j);
  }

  std::optional<Edge> edge_between(int i, int j) const {
    for (const Edge& e : edges_)
      if ((e.a == i && e.b == j) || (e.a == j && e.b == i)) return e;
    return std::nullopt;
  }

  void check_node(int i) const {
    if (i < 1 || i > d_) throw GraphError("unknown node " + std::to_string(i));
  }

 private:
  bool pair_coupled(int lo, int hi) const {
    return parents_[lo].contains(hi) || parents_[hi].contains(lo) ||
           dashed_[lo].contains(hi) || full_[lo].contains(hi);
  }
  NodeSet at(const std::vector<NodeSet>& v, int i) const {
    check_node(i);
    return v[i];
  }

  int d_ = 0;
  std::vector<Edge> edges_;
  std::optional<NodeSet> context_decl_;
  std::vector<NodeSet> parents_, children_, dashed_, full_;
};

enum class ComponentKind { Dashed, Full, Singleton };

struct Component {
  NodeSet nodes;
  ComponentKind kind;
};

// Connected components of the graph with all arrows removed, listed by
// smallest contained node.
inline std::vector<Component> components(const RegressionGraph& g) {
  const int d = g.node_count();
  std::vector<int> root(d + 1);
  for (int i = 1; i <= d; ++i) root[i] = i;
  auto find = [&](int i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  for (const Edge& e : g.edges())
    if (e.type != EdgeType::Arrow) root[find(e.a)] = find(e.b);

  std::vector<Component> out;
  std::vector<int> slot(d + 1, -1);
  for (int i = 1; i <= d; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.push_back({NodeSet(), ComponentKind::Singleton});
    }
    Component& c = out[slot[r]];
    c.nodes.add(i);
    if (!g.dashed_neighbours(i).empty()) c.kind = ComponentKind::Dashed;
    else if (!g.full_neighbours(i).empty()) c.kind = ComponentKind::Full;
  }
  return out;
}

struct Partition {
  NodeSet response;  // u
  NodeSet context;   // v
};

// Splits N into response set u and context set v. Full-line endpoints are
// always context; nodes with a dashed edge or an incoming arrow are always
// response; ambiguous nodes follow the declaration when one is given and
// default to context otherwise.
inline Partition resolve_partition(const RegressionGraph& g) {
  NodeSet v;
  const int d = g.node_count();
  for (int i = 1; i <= d; ++i) {
    bool forced_response =
        !g.dashed_neighbours(i).empty() || !g.parents(i).empty();
    bool forced_context = !g.full_neighbours(i).empty();
    if (forced_context) {
      v.add(i);
    } else if (forced_response) {
      if (g.context_decl() && g.context_decl()->contains(i))
        throw GraphError("declared context node " + std::to_string(i) +
                         " has a dashed edge or an incoming arrow");
    } else {
      // ambiguous: declaration wins, default is context
      if (g.context_decl() ? g.context_decl()->contains(i) : true) v.add(i);
    }
  }
  return {g.nodes() - v, v};
}

struct Violation {
  std::string rule;
  std::string detail;
};

inline std::vector<Violation> validate(const RegressionGraph& g) {
  std::vector<Violation> out;
  const int d = g.node_count();

  for (int i = 1; i <= d; ++i) {
    if (!g.full_neighbours(i).empty() && !g.dashed_neighbours(i).empty())
      out.push_back({"dashed-meets-full",
                     "node " + std::to_string(i) +
                         " has both a dashed and a full line"});
    if (!g.full_neighbours(i).empty() && !g.parents(i).empty())
      out.push_back({"arrow-into-full",
                     "arrow points to full-line node " + std::to_string(i)});
  }

  auto comps = components(g);
  std::vector<int> comp_of(d + 1, -1);
  for (size_t c = 0; c < comps.size(); ++c)
    comps[c].nodes.for_each([&](int i) { comp_of[i] = static_cast<int>(c); });

  for (const Component& c : comps) {
    bool has_dashed = false, has_full = false;
    c.nodes.for_each([&](int i) {
      has_dashed |= !g.dashed_neighbours(i).empty();
      has_full |= !g.full_neighbours(i).empty();
    });
    if (has_dashed && has_full)
      out.push_back({"mixed-component",
                     "component {" + c.nodes.str() +
                         "} mixes dashed and full lines"});
  }

  // component digraph: edge c_head -> c_tail for every arrow
  std::vector<std::vector<int>> succ(comps.size());
  for (const Edge& e : g.edges()) {
    if (e.type != EdgeType::Arrow) continue;
    int ct = comp_of[e.a], ch = comp_of[e.b];
    if (ct == ch) {
      out.push_back({"arrow-inside-component",
                     "arrow to " + std::to_string(e.b) + " from " +
                         std::to_string(e.a) + " joins one component"});
    } else {
      succ[ch].push_back(ct);
    }
  }

  // cycle check over the component digraph
  std::vector<int> state(comps.size(), 0);
  bool cyclic = false;
  auto dfs = [&](auto&& self, int c) -> void {
    state[c] = 1;
    for (int n : succ[c]) {
      if (state[n] == 1) cyclic = true;
      else if (state[n] == 0) self(self, n);
    }
    state[c] = 2;
  };
  for (size_t c = 0; c < comps.size() && !cyclic; ++c)
    if (state[c] == 0) dfs(dfs, static_cast<int>(c));
  if (cyclic)
    out.push_back({"component-cycle", "directed cycle among components"});

  if (g.context_decl()) {
    const NodeSet decl = *g.context_decl();
    for (int i = 1; i <= d; ++i) {
      if (!g.full_neighbours(i).empty() && !decl.contains(i))
        out.push_back({"undeclared-context",
                       "full-line node " + std::to_string(i) +
                           " missing from context declaration"});
    }
    decl.for_each([&](int i) {
      if (!g.dashed_neighbours(i).empty() || !g.parents(i).empty())
        out.push_back({"context-conflict",
                       "declared context node " + std::to_string(i) +
                           " has a dashed edge or an incoming arrow"});
    });
  }
  return out;
}

inline bool is_valid(const RegressionGraph& g) { return validate(g).empty(); }

enum class TieBreak { SmallestNode, LargestNode };

// A valid ordering g_1,...,g_Q of the connected components together with
// the complete valid node ordering extending it.
struct ComponentOrdering {
  std::vector<Component> components;        // in order g_1,...,g_Q
  std::vector<int> component_of;            // node -> position in components
  std::vector<int> node_order;              // complete valid ordering
  std::vector<int> node_position;           // node -> index into node_order

  int position(int i) const { return component_of.at(i); }
  bool before(int i, int j) const {
    return node_position.at(i) < node_position.at(j);
  }
  NodeSet past(int i) const {
    NodeSet out;
    for (size_t q = component_of.at(i) + 1; q < components.size(); ++q)
      out |= components[q].nodes;
    return out;
  }
};

// Deterministic valid ordering: Kahn over the component digraph, response
// components before all context components, ties by smallest (or largest)
// contained node.
inline ComponentOrdering valid_ordering(const RegressionGraph& g,
                                        TieBreak tie = TieBreak::SmallestNode) {
  auto comps = components(g);
  const int d = g.node_count();
  const Partition uv = resolve_partition(g);

  std::vector<int> comp_of(d + 1, -1);
  for (size_t c = 0; c < comps.size(); ++c)
    comps[c].nodes.for_each([&](int i) { comp_of[i] = static_cast<int>(c); });

  const int n = static_cast<int>(comps.size());
  // prereq[c] = components that must be placed before c
  std::vector<std::vector<int>> dependents(n);
  std::vector<int> missing(n, 0);
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (const Edge& e : g.edges()) {
    if (e.type != EdgeType::Arrow) continue;
    int ct = comp_of[e.a], ch = comp_of[e.b];
    if (ct == ch || seen[ct][ch]) continue;
    seen[ct][ch] = true;
    dependents[ch].push_back(ct);  // head's component precedes tail's
    ++missing[ct];
  }

  auto is_context = [&](int c) {
    return comps[c].nodes.subset_of(uv.context);
  };
  auto key = [&](int c) {
    return tie == TieBreak::SmallestNode ? comps[c].nodes.min()
                                         : -comps[c].nodes.max();
  };

  ComponentOrdering ord;
  ord.component_of.assign(d + 1, -1);
  ord.node_position.assign(d + 1, -1);
  std::vector<bool> placed(n, false);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    bool best_ctx = false;
    for (int c = 0; c < n; ++c) {
      if (placed[c] || missing[c] > 0) continue;
      bool ctx = is_context(c);
      if (best < 0 || std::make_tuple(ctx, key(c)) <
                          std::make_tuple(best_ctx, key(best))) {
        best = c;
        best_ctx = ctx;
      }
    }
    if (best < 0)
      throw GraphError("cycle among components: no valid ordering exists");
    placed[best] = true;
    for (int dep : dependents[best]) --missing[dep];
    int q = static_cast<int>(ord.components.size());
    ord.components.push_back(comps[best]);
    comps[best].nodes.for_each([&](int i) {
      ord.component_of[i] = q;
      ord.node_position[i] = static_cast<int>(ord.node_order.size());
      ord.node_order.push_back(i);
    });
  }
  return ord;
}

inline NodeSet par(const RegressionGraph& g, int i) { return g.parents(i); }

// Anteriors of i: nodes with a direction-preserving path to i, possibly
// extended backwards along full lines; never contains i.
inline NodeSet ant(const RegressionGraph& g, int i) {
  g.check_node(i);
  NodeSet anc;
  anc.add(i);
  std::vector<int> stack{i};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    g.parents(x).for_each([&](int p) {
      if (!anc.contains(p)) {
        anc.add(p);
        stack.push_back(p);
      }
    });
  }
  NodeSet out = anc;
  anc.for_each([&](int x) { stack.push_back(x); });
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    g.full_neighbours(x).for_each([&](int f) {
      if (!out.contains(f)) {
        out.add(f);
        stack.push_back(f);
      }
    });
  }
  out.remove(i);
  return out;
}

inline NodeSet ant_of_set(const RegressionGraph& g, NodeSet s) {
  NodeSet out;
  s.for_each([&](int i) { out |= ant(g, i); });
  return out;
}

inline NodeSet pst(const RegressionGraph& g, const ComponentOrdering& ord,
                   int i) {
  g.check_node(i);
  return ord.past(i);
}

struct PairSets {
  NodeSet par;
  NodeSet ant;
  NodeSet pst;
};

// par/ant/pst of the pair {i,j}, each with {i,j} removed.
inline PairSets pair_sets(const RegressionGraph& g,
                          const ComponentOrdering& ord, int i, int j) {
  if (i == j) throw GraphError("pair_sets needs two distinct nodes");
  g.check_node(i);
  g.check_node(j);
  NodeSet ij = NodeSet::of({i, j});
  PairSets s{(par(g, i) | par(g, j)) - ij, (ant(g, i) | ant(g, j)) - ij,
             (pst(g, ord, i) | pst(g, ord, j)) - ij};
  int lo = ord.before(i, j) ? i : j;
  int hi = lo == i ? j : i;
  NodeSet check = pst(g, ord, lo);
  check.remove(hi);
  if (s.pst != check)
    throw GraphError("pst(i,j) != pst(i) \\ {j} for pair " +
                     std::to_string(i) + "," + std::to_string(j));
  return s;
}

// Completion of g under the given ordering: context pairs get full lines,
// pairs within a response component get dashed lines, every other missing
// pair gets an arrow to the earlier node from the later one.
inline RegressionGraph saturate(const RegressionGraph& g,
                                const ComponentOrdering& ord) {
  const Partition uv = resolve_partition(g);
  std::vector<Edge> edges = g.edges();
  const int d = g.node_count();
  for (int i = 1; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      if (g.coupled(i, j)) continue;
      if (uv.context.contains(i) && uv.context.contains(j)) {
        edges.push_back({EdgeType::Full, i, j});
      } else if (ord.position(i) == ord.position(j)) {
        edges.push_back({EdgeType::Dashed, i, j});
      } else {
        int earlier = ord.before(i, j) ? i : j;
        int later = earlier == i ? j : i;
        edges.push_back({EdgeType::Arrow, later, earlier});
      }
    }
  }
  return RegressionGraph(d, std::move(edges), uv.context);
}

}  // namespace regmark

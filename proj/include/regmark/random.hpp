#pragma once

#include <cstdint>
#include <random>

#include "graph.hpp"

namespace regmark {

// mt19937_64-backed uniforms with implementation-independent output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // in [0, n)
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(gen_() % n); }
  bool chance(double p) { return uniform() < p; }
  // magnitude in [lo,hi], random sign
  double signed_uniform(double lo, double hi) {
    double v = uniform(lo, hi);
    return chance(0.5) ? v : -v;
  }

 private:
  std::mt19937_64 gen_;
};

struct EdgeDensities {
  double dashed = 0.5;
  double full = 0.5;
  double arrow = 0.5;
};

// Samples a valid regression graph: a component partition with context
// components last, spanning trees plus density-driven extra lines within
// components, and arrows only to earlier response components from later
// ones. Deterministic given the seed.
inline RegressionGraph random_graph(int n, std::uint64_t seed,
                                    EdgeDensities dens = {}) {
  if (n < 1) throw GraphError("random_graph needs n >= 1");
  Rng rng(seed);

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i + 1;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  int n_ctx = rng.below(n + 1);
  std::vector<std::vector<int>> response_comps, context_comps;
  for (int k = 0; k < n; ++k) {
    auto& comps = k < n_ctx ? context_comps : response_comps;
    if (comps.empty() || rng.chance(0.5)) comps.emplace_back();
    comps[rng.below(static_cast<int>(comps.size()))].push_back(perm[k]);
    if (comps.back().empty()) comps.pop_back();
  }

  std::vector<Edge> edges;
  auto fill_component = [&](const std::vector<int>& comp, EdgeType type,
                            double density) {
    for (size_t k = 1; k < comp.size(); ++k) {
      int other = comp[rng.below(static_cast<int>(k))];
      int a = std::min(comp[k], other), b = std::max(comp[k], other);
      edges.push_back({type, a, b});
    }
    for (size_t x = 0; x < comp.size(); ++x)
      for (size_t y = x + 1; y < comp.size(); ++y) {
        int a = std::min(comp[x], comp[y]), b = std::max(comp[x], comp[y]);
        bool present = false;
        for (const Edge& e : edges)
          present |= e.type == type && e.a == a && e.b == b;
        if (!present && rng.chance(density)) edges.push_back({type, a, b});
      }
  };
  for (const auto& c : response_comps)
    fill_component(c, EdgeType::Dashed, dens.dashed);
  for (const auto& c : context_comps)
    fill_component(c, EdgeType::Full, dens.full);

  // ordered component list: responses first, then context
  std::vector<std::vector<int>> ordered = response_comps;
  ordered.insert(ordered.end(), context_comps.begin(), context_comps.end());
  const size_t n_resp = response_comps.size();
  for (size_t lo = 0; lo < n_resp; ++lo)
    for (size_t hi = lo + 1; hi < ordered.size(); ++hi)
      for (int target : ordered[lo])
        for (int source : ordered[hi])
          if (rng.chance(dens.arrow))
            edges.push_back({EdgeType::Arrow, source, target});

  return RegressionGraph(n, std::move(edges));
}

}  // namespace regmark

#pragma once

#include <nlohmann/json.hpp>

#include <deque>
#include <map>
#include <unordered_map>

#include "statements.hpp"

namespace regmark {

enum class Rule {
  Symmetry,
  Decomposition,
  WeakUnion,
  Contraction,
  Intersection,
  Composition
};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Symmetry: return "symmetry";
    case Rule::Decomposition: return "decomposition";
    case Rule::WeakUnion: return "weak-union";
    case Rule::Contraction: return "contraction";
    case Rule::Intersection: return "intersection";
    case Rule::Composition: return "composition";
  }
  return "?";
}

struct RuleSet {
  bool decomposition = true;
  bool weak_union = true;
  bool contraction = true;
  bool intersection = true;
  bool composition = true;
};

struct ClosureBudget {
  std::size_t max_statements = 200000;
  int max_side = 64;  // cap on |A|,|B| of derived statements
};

struct ClosureResult {
  StatementSet statements;
  bool saturated = true;
};

namespace detail {

// One orientation of a canonical statement: `a` independent of `b` given `c`.
struct Oriented {
  NodeSet a, b, c;
};

inline std::optional<IndependenceStatement> try_contraction(const Oriented& s,
                                                            const Oriented& t) {
  // a||b|dc and a||d|c  =>  a||bd|c   (s supplies b, t supplies d)
  if (s.a != t.a) return std::nullopt;
  if (!t.b.subset_of(s.c) || s.c - t.b != t.c) return std::nullopt;
  return IndependenceStatement(s.a, s.b | t.b, t.c);
}

inline std::optional<IndependenceStatement> try_intersection(const Oriented& s,
                                                             const Oriented& t) {
  // a||d|bc and a||b|dc  =>  a||bd|c   (s supplies d, t supplies b)
  if (s.a != t.a) return std::nullopt;
  if (!t.b.subset_of(s.c) || !s.b.subset_of(t.c)) return std::nullopt;
  if (s.c - t.b != t.c - s.b) return std::nullopt;
  return IndependenceStatement(s.a, s.b | t.b, s.c - t.b);
}

inline std::optional<IndependenceStatement> try_composition(const Oriented& s,
                                                            const Oriented& t) {
  // a||d|c and a||b|c  =>  a||bd|c
  if (s.a != t.a || s.c != t.c || !s.b.disjoint_with(t.b)) return std::nullopt;
  return IndependenceStatement(s.a, s.b | t.b, s.c);
}

}  // namespace detail

// Every statement obtainable from the premises by one application of the
// rule, considering both orientations of each premise. Results are
// canonical, so symmetry maps each premise to itself.
inline StatementSet apply_rule(Rule r,
                               const std::vector<IndependenceStatement>& premises) {
  StatementSet out;
  std::vector<detail::Oriented> oriented;
  for (const auto& p : premises) {
    oriented.push_back({p.A, p.B, p.C});
    oriented.push_back({p.B, p.A, p.C});
  }
  for (const auto& o : oriented) {
    switch (r) {
      case Rule::Symmetry:
        out.emplace(o.b, o.a, o.c);
        break;
      case Rule::Decomposition:
        o.b.for_each_nonempty_subset([&](NodeSet sub) {
          if (sub != o.b) out.emplace(o.a, sub, o.c);
        });
        break;
      case Rule::WeakUnion:
        o.b.for_each_nonempty_subset([&](NodeSet moved) {
          if (moved != o.b) out.emplace(o.a, o.b - moved, o.c | moved);
        });
        break;
      default:
        for (const auto& t : oriented) {
          std::optional<IndependenceStatement> c;
          if (r == Rule::Contraction) c = detail::try_contraction(o, t);
          else if (r == Rule::Intersection) c = detail::try_intersection(o, t);
          else c = detail::try_composition(o, t);
          if (c) out.insert(*c);
        }
    }
  }
  return out;
}

// Least fixpoint of the graphoid rules over the premises. Statements are
// kept canonical, so symmetry is built in; the remaining five rules can be
// toggled through `rules`. Exceeding the statement budget or the side cap
// yields a partial set flagged saturated=false.
inline ClosureResult closure(const StatementSet& premises, NodeSet universe,
                             RuleSet rules = {}, ClosureBudget budget = {}) {
  ClosureResult result;
  std::deque<IndependenceStatement> pending(premises.begin(), premises.end());
  StatementSet queued(premises.begin(), premises.end());
  // partner lookup for the binary rules, keyed by the `a` side
  std::unordered_map<std::uint64_t, std::vector<detail::Oriented>> by_a;
  bool capped = false;

  auto emit = [&](const IndependenceStatement& st) {
    if (!st.A.subset_of(universe) || !st.B.subset_of(universe) ||
        !st.C.subset_of(universe))
      throw GraphError("statement outside universe: " + st.str());
    if (st.A.size() > budget.max_side || st.B.size() > budget.max_side) {
      capped = true;
      return;
    }
    if (result.statements.count(st) || queued.count(st)) return;
    queued.insert(st);
    pending.push_back(st);
  };

  while (!pending.empty()) {
    if (result.statements.size() >= budget.max_statements) {
      result.saturated = false;
      return result;
    }
    IndependenceStatement s = pending.front();
    pending.pop_front();
    if (!result.statements.insert(s).second) continue;

    const detail::Oriented fwd{s.A, s.B, s.C}, rev{s.B, s.A, s.C};
    for (const auto& o : {fwd, rev}) {
      if (rules.decomposition)
        o.b.for_each_nonempty_subset([&](NodeSet sub) {
          if (sub != o.b) emit(IndependenceStatement(o.a, sub, o.c));
        });
      if (rules.weak_union)
        o.b.for_each_nonempty_subset([&](NodeSet moved) {
          if (moved != o.b)
            emit(IndependenceStatement(o.a, o.b - moved, o.c | moved));
        });
      for (const auto& t : by_a[o.a.bits()]) {
        if (rules.contraction) {
          if (auto c = detail::try_contraction(o, t)) emit(*c);
          if (auto c = detail::try_contraction(t, o)) emit(*c);
        }
        if (rules.intersection) {
          if (auto c = detail::try_intersection(o, t)) emit(*c);
          if (auto c = detail::try_intersection(t, o)) emit(*c);
        }
        if (rules.composition) {
          if (auto c = detail::try_composition(o, t)) emit(*c);
        }
      }
    }
    by_a[fwd.a.bits()].push_back(fwd);
    by_a[rev.a.bits()].push_back(rev);
  }
  result.saturated &= !capped;
  return result;
}

// Direction-sensitive statement used by proof search, where symmetry is an
// explicit step.
struct OrderedStatement {
  NodeSet A, B, C;

  OrderedStatement() = default;
  OrderedStatement(NodeSet a, NodeSet b, NodeSet c) : A(a), B(b), C(c) {}
  explicit OrderedStatement(const IndependenceStatement& s)
      : A(s.A), B(s.B), C(s.C) {}

  IndependenceStatement canonical() const {
    return IndependenceStatement(A, B, C);
  }
  friend bool operator==(const OrderedStatement&,
                         const OrderedStatement&) = default;
  friend bool operator<(const OrderedStatement& x, const OrderedStatement& y) {
    return std::tie(x.A, x.B, x.C) < std::tie(y.A, y.B, y.C);
  }
  std::string str() const {
    return A.str() + " | " + B.str() + " | " + C.str();
  }
};

struct ProofStep {
  Rule rule;
  std::vector<OrderedStatement> premises;
  OrderedStatement conclusion;
};

struct ProofTrace {
  std::vector<OrderedStatement> axioms;
  std::vector<ProofStep> steps;  // topologically ordered
  OrderedStatement conclusion;
};

// Re-applies the trace from its axioms; true iff every step is a correct
// rule application from available statements and the final conclusion is
// reached.
inline bool replay(const ProofTrace& trace) {
  std::set<OrderedStatement> have(trace.axioms.begin(), trace.axioms.end());
  auto as_oriented = [](const OrderedStatement& s) {
    return detail::Oriented{s.A, s.B, s.C};
  };
  for (const auto& step : trace.steps) {
    for (const auto& p : step.premises)
      if (!have.count(p)) return false;
    bool ok = false;
    const auto& prem = step.premises;
    const auto& con = step.conclusion;
    switch (step.rule) {
      case Rule::Symmetry:
        ok = prem.size() == 1 && con.A == prem[0].B && con.B == prem[0].A &&
             con.C == prem[0].C;
        break;
      case Rule::Decomposition:
        ok = prem.size() == 1 && con.A == prem[0].A && con.C == prem[0].C &&
             con.B.subset_of(prem[0].B) && !con.B.empty();
        break;
      case Rule::WeakUnion: {
        if (prem.size() != 1 || con.A != prem[0].A) break;
        NodeSet moved = prem[0].B - con.B;
        ok = con.B.subset_of(prem[0].B) && !con.B.empty() &&
             con.C == (prem[0].C | moved);
        break;
      }
      case Rule::Contraction:
        ok = prem.size() == 2 &&
             detail::try_contraction(as_oriented(prem[0]),
                                     as_oriented(prem[1])) ==
                 con.canonical();
        break;
      case Rule::Intersection:
        ok = prem.size() == 2 &&
             detail::try_intersection(as_oriented(prem[0]),
                                      as_oriented(prem[1])) ==
                 con.canonical();
        break;
      case Rule::Composition:
        ok = prem.size() == 2 &&
             detail::try_composition(as_oriented(prem[0]),
                                     as_oriented(prem[1])) ==
                 con.canonical();
        break;
    }
    if (!ok) return false;
    have.insert(step.conclusion);
  }
  return have.count(trace.conclusion) > 0;
}

struct DeriveBudget {
  std::size_t max_statements = 10000;
};

struct DeriveResult {
  std::optional<ProofTrace> trace;
  bool budget_exhausted = false;
};

// Breadth-first proof search from the premises; the goal is matched up to
// symmetry of its two sides. Returns the shortest trace found.
inline DeriveResult derive(const IndependenceStatement& goal,
                           const StatementSet& premises, RuleSet rules = {},
                           DeriveBudget budget = {}) {
  struct Origin {
    int rule = -1;  // -1 = axiom
    int p1 = -1, p2 = -1;
  };
  std::vector<OrderedStatement> found;
  std::vector<Origin> origin;
  std::map<OrderedStatement, int> index;

  auto trace_of = [&](int goal_idx) {
    ProofTrace trace;
    std::vector<int> stack{goal_idx};
    std::set<int> needed;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      if (needed.count(i)) continue;
      needed.insert(i);
      if (origin[i].p1 >= 0) stack.push_back(origin[i].p1);
      if (origin[i].p2 >= 0) stack.push_back(origin[i].p2);
    }
    for (int i : needed) {  // ascending discovery order = topological
      if (origin[i].rule < 0) {
        trace.axioms.push_back(found[i]);
        continue;
      }
      ProofStep step;
      step.rule = static_cast<Rule>(origin[i].rule);
      step.premises.push_back(found[origin[i].p1]);
      if (origin[i].p2 >= 0) step.premises.push_back(found[origin[i].p2]);
      step.conclusion = found[i];
      trace.steps.push_back(step);
    }
    trace.conclusion = found[goal_idx];
    return trace;
  };

  int goal_idx = -1;
  bool exhausted = false;
  auto add = [&](const OrderedStatement& s, Origin o) {
    if (found.size() >= budget.max_statements) {
      exhausted = true;
      return;
    }
    if (index.count(s)) return;
    index[s] = static_cast<int>(found.size());
    found.push_back(s);
    origin.push_back(o);
    if (goal_idx < 0 && s.canonical() == goal)
      goal_idx = static_cast<int>(found.size()) - 1;
  };

  for (const auto& p : premises) add(OrderedStatement(p), {});
  if (goal_idx >= 0) return {trace_of(goal_idx), false};

  auto as_oriented = [](const OrderedStatement& s) {
    return detail::Oriented{s.A, s.B, s.C};
  };
  auto add_if = [&](const std::optional<IndependenceStatement>& c, Rule r,
                    int i, int j, const OrderedStatement& sample) {
    if (!c) return;
    // keep the literal (uncanonicalized) conclusion of the rule
    add(sample, {static_cast<int>(r), i, j});
  };

  for (size_t i = 0; i < found.size() && goal_idx < 0; ++i) {
    OrderedStatement s = found[i];
    int si = static_cast<int>(i);
    add({s.B, s.A, s.C}, {static_cast<int>(Rule::Symmetry), si, -1});
    if (goal_idx >= 0) break;
    if (rules.decomposition)
      s.B.for_each_nonempty_subset([&](NodeSet sub) {
        if (sub != s.B)
          add({s.A, sub, s.C}, {static_cast<int>(Rule::Decomposition), si, -1});
      });
    if (goal_idx >= 0) break;
    if (rules.weak_union)
      s.B.for_each_nonempty_subset([&](NodeSet moved) {
        if (moved != s.B)
          add({s.A, s.B - moved, s.C | moved},
              {static_cast<int>(Rule::WeakUnion), si, -1});
      });
    if (goal_idx >= 0) break;
    for (size_t j = 0; j < i && goal_idx < 0; ++j) {
      OrderedStatement t = found[j];
      int tj = static_cast<int>(j);
      for (auto [x, y, xi, yi] :
           {std::tuple{s, t, si, tj}, std::tuple{t, s, tj, si}}) {
        if (rules.contraction)
          if (auto c = detail::try_contraction(as_oriented(x), as_oriented(y)))
            add_if(c, Rule::Contraction, xi, yi, {x.A, x.B | y.B, y.C});
        if (rules.intersection)
          if (auto c = detail::try_intersection(as_oriented(x), as_oriented(y)))
            add_if(c, Rule::Intersection, xi, yi, {x.A, x.B | y.B, x.C - y.B});
        if (rules.composition)
          if (auto c = detail::try_composition(as_oriented(x), as_oriented(y)))
            add_if(c, Rule::Composition, xi, yi, {x.A, x.B | y.B, x.C});
        if (goal_idx >= 0) break;
      }
    }
    if (exhausted) break;
  }
  if (goal_idx < 0) return {std::nullopt, exhausted};
  return {trace_of(goal_idx), false};
}

struct TransitivityViolation {
  int i, j, k;
  NodeSet c;
};

// Singleton transitivity is a disjunctive condition, so it is checked
// rather than closed over: reports every (i,j,k,c) with j||k|c and
// j||k|ic present but neither i||j|c nor i||k|c.
inline std::vector<TransitivityViolation> check_singleton_transitivity(
    const StatementSet& statements, NodeSet universe) {
  std::vector<TransitivityViolation> out;
  auto has = [&](int a, int b, NodeSet c) {
    return statements.count(
               IndependenceStatement(NodeSet::of({a}), NodeSet::of({b}), c)) > 0;
  };
  for (const auto& s : statements) {
    if (s.A.size() != 1 || s.B.size() != 1) continue;
    int j = s.A.min(), k = s.B.min();
    universe.for_each([&](int i) {
      if (i == j || i == k || s.C.contains(i)) return;
      NodeSet ic = s.C;
      ic.add(i);
      if (!has(j, k, ic)) return;
      if (has(i, j, s.C) || has(i, k, s.C)) return;
      out.push_back({i, j, k, s.C});
    });
  }
  return out;
}

inline nlohmann::json trace_to_json(const ProofTrace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : trace.steps) {
    nlohmann::json prem = nlohmann::json::array();
    for (const auto& p : st.premises) prem.push_back(p.str());
    steps.push_back({{"rule", rule_name(st.rule)},
                     {"premises", prem},
                     {"conclusion", st.conclusion.str()}});
  }
  nlohmann::json axioms = nlohmann::json::array();
  for (const auto& a : trace.axioms) axioms.push_back(a.str());
  return {{"axioms", axioms},
          {"steps", steps},
          {"conclusion", trace.conclusion.str()}};
}

}  // namespace regmark

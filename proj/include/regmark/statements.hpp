#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <iomanip>
#include <set>
#include <sstream>

#include "graph.hpp"

namespace regmark {

// A |_ B given C, stored canonically: A,B,C pairwise disjoint, A and B
// nonempty, and the numerically smaller of A,B kept first.
struct IndependenceStatement {
  NodeSet A, B, C;

  IndependenceStatement() = default;
  IndependenceStatement(NodeSet a, NodeSet b, NodeSet c) : A(a), B(b), C(c) {
    if (A.empty() || B.empty())
      throw GraphError("independence statement with empty side");
    if (!A.disjoint_with(B) || !A.disjoint_with(C) || !B.disjoint_with(C))
      throw GraphError("independence statement sets must be disjoint");
    if (B < A) std::swap(A, B);
  }

  friend bool operator==(const IndependenceStatement&,
                         const IndependenceStatement&) = default;
  friend bool operator<(const IndependenceStatement& x,
                        const IndependenceStatement& y) {
    return std::tie(x.A, x.B, x.C) < std::tie(y.A, y.B, y.C);
  }

  std::string str() const {
    return A.str() + " | " + B.str() + " | " + C.str();
  }
};

using StatementSet = std::set<IndependenceStatement>;

inline std::string serialize_statements(const StatementSet& s) {
  std::string out;
  for (const auto& st : s) out += st.str() + "\n";
  return out;
}

inline IndependenceStatement parse_statement(const std::string& line) {
  std::array<NodeSet, 3> parts;
  std::string spaced;
  for (char c : line) {
    if (c == '|') spaced += " | ";
    else spaced += c;
  }
  std::istringstream in(spaced);
  std::string tok;
  int slot = 0;
  while (in >> tok) {
    if (tok == "|") {
      ++slot;
      continue;
    }
    if (slot > 2) throw GraphError("bad statement '" + line + "'");
    if (tok == "-") continue;
    std::istringstream ts(tok);
    std::string id;
    while (std::getline(ts, id, ',')) {
      try {
        parts[slot].add(std::stoi(id));
      } catch (const std::exception&) {
        throw GraphError("bad node id '" + id + "' in '" + line + "'");
      }
    }
  }
  if (slot != 2) throw GraphError("bad statement '" + line + "'");
  return IndependenceStatement(parts[0], parts[1], parts[2]);
}

inline StatementSet parse_statements(const std::string& text) {
  StatementSet out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.insert(parse_statement(line));
  }
  return out;
}

enum class Property { P1_Past, P2_Anteriors, P3_JointParents, P4_ParentsOfLower };

inline const char* property_name(Property p) {
  switch (p) {
    case Property::P1_Past: return "p1";
    case Property::P2_Anteriors: return "p2";
    case Property::P3_JointParents: return "p3";
    case Property::P4_ParentsOfLower: return "p4";
  }
  return "?";
}

inline std::optional<Property> property_from_name(const std::string& s) {
  if (s == "p1" || s == "past") return Property::P1_Past;
  if (s == "p2" || s == "anteriors") return Property::P2_Anteriors;
  if (s == "p3" || s == "parents") return Property::P3_JointParents;
  if (s == "p4" || s == "parents-of-lower") return Property::P4_ParentsOfLower;
  return std::nullopt;
}

struct PairwiseOptions {
  // Only consulted when both nodes of a pair share a component: condition
  // on the parents of the later node instead of the earlier one.
  bool p4_use_upper_parents = false;
};

// One statement per uncoupled pair: context pairs condition on the rest of
// the context set, response pairs on pst/ant/par of the pair or par of the
// earlier node, depending on the property.
inline StatementSet pairwise_statements(const RegressionGraph& g,
                                        const ComponentOrdering& ord,
                                        Property p,
                                        PairwiseOptions opts = {}) {
  const Partition uv = resolve_partition(g);
  StatementSet out;
  const int d = g.node_count();
  for (int i = 1; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      if (g.coupled(i, j)) continue;
      NodeSet ij = NodeSet::of({i, j});
      if (uv.context.contains(i) && uv.context.contains(j)) {
        out.emplace(NodeSet::of({i}), NodeSet::of({j}), uv.context - ij);
        continue;
      }
      int lo = ord.before(i, j) ? i : j;
      int hi = lo == i ? j : i;
      PairSets sets = pair_sets(g, ord, i, j);
      if (!sets.ant.subset_of(sets.pst))
        throw GraphError("ant(i,j) not within pst(i,j) for pair " +
                         std::to_string(i) + "," + std::to_string(j));
      NodeSet cond;
      switch (p) {
        case Property::P1_Past: cond = sets.pst; break;
        case Property::P2_Anteriors: cond = sets.ant; break;
        case Property::P3_JointParents: cond = sets.par; break;
        case Property::P4_ParentsOfLower: {
          bool same_comp = ord.position(i) == ord.position(j);
          int anchor = (opts.p4_use_upper_parents && same_comp) ? hi : lo;
          cond = par(g, anchor) - ij;
          break;
        }
      }
      out.emplace(NodeSet::of({lo}), NodeSet::of({hi}), cond);
    }
  }
  return out;
}

struct PairRow {
  int i, j;
  NodeSet pst, ant, par_pair, par_lower;
};

inline std::vector<PairRow> statement_report(const RegressionGraph& g,
                                             const ComponentOrdering& ord) {
  std::vector<PairRow> rows;
  const Partition uv = resolve_partition(g);
  const int d = g.node_count();
  for (int i = 1; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      if (g.coupled(i, j)) continue;
      NodeSet ij = NodeSet::of({i, j});
      if (uv.context.contains(i) && uv.context.contains(j)) {
        NodeSet rest = uv.context - ij;
        rows.push_back({i, j, rest, rest, rest, rest});
        continue;
      }
      PairSets sets = pair_sets(g, ord, i, j);
      int lo = ord.before(i, j) ? i : j;
      rows.push_back({i, j, sets.pst, sets.ant, sets.par, par(g, lo) - ij});
    }
  }
  return rows;
}

inline nlohmann::json report_to_json(const std::vector<PairRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"pair", {r.i, r.j}},
                   {"pst", r.pst.to_vector()},
                   {"ant", r.ant.to_vector()},
                   {"par_pair", r.par_pair.to_vector()},
                   {"par_lower", r.par_lower.to_vector()}});
  return out;
}

inline std::string report_to_text(const std::vector<PairRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "pair" << std::setw(18) << "pst"
      << std::setw(18) << "ant" << std::setw(14) << "par-pair"
      << "par-lower\n";
  for (const auto& r : rows)
    out << std::left << std::setw(8)
        << (std::to_string(r.i) + "," + std::to_string(r.j)) << std::setw(18)
        << r.pst.str() << std::setw(18) << r.ant.str() << std::setw(14)
        << r.par_pair.str() << r.par_lower.str() << "\n";
  return out.str();
}

}  // namespace regmark

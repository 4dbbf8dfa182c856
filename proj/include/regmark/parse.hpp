#pragma once

#include <nlohmann/json.hpp>

#include <cctype>
#include <sstream>
#include <string>

#include "graph.hpp"

namespace regmark {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

namespace detail {

inline int parse_id(const std::string& tok, int line_no) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || v < 1)
    throw ParseError(line_no, "expected a node id, got '" + tok + "'");
  return v;
}

}  // namespace detail

// Line-oriented graph file:
//   node <id> [context|response]
//   a -- b      full line
//   a ~~ b      dashed line
//   j -> i      arrow pointing to i from j
// '#' starts a comment.
inline RegressionGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int max_id = 0;
  bool any_decl = false;
  NodeSet context_decl;
  std::vector<Edge> edges;
  std::vector<std::pair<int, int>> pairs;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string t1, t2, t3, extra;
    if (!(ls >> t1)) continue;

    if (t1 == "node") {
      if (!(ls >> t2)) throw ParseError(line_no, "node declaration needs an id");
      int id = detail::parse_id(t2, line_no);
      max_id = std::max(max_id, id);
      if (ls >> t3) {
        if (t3 == "context") {
          any_decl = true;
          context_decl.add(id);
        } else if (t3 == "response") {
          any_decl = true;
        } else {
          throw ParseError(line_no, "expected 'context' or 'response', got '" +
                                        t3 + "'");
        }
      }
      continue;
    }

    if (!(ls >> t2 >> t3) || (ls >> extra))
      throw ParseError(line_no, "expected '<a> <edge> <b>'");
    int a = detail::parse_id(t1, line_no);
    int b = detail::parse_id(t3, line_no);
    if (a == b) throw ParseError(line_no, "self-loop at node " + t1);
    for (auto [x, y] : pairs)
      if ((x == a && y == b) || (x == b && y == a))
        throw ParseError(line_no, "duplicate edge for pair " +
                                      std::to_string(std::min(a, b)) + "," +
                                      std::to_string(std::max(a, b)));
    pairs.emplace_back(a, b);
    max_id = std::max({max_id, a, b});
    if (t2 == "--") edges.push_back({EdgeType::Full, a, b});
    else if (t2 == "~~") edges.push_back({EdgeType::Dashed, a, b});
    else if (t2 == "->") edges.push_back({EdgeType::Arrow, a, b});
    else throw ParseError(line_no, "unknown edge '" + t2 + "'");
  }

  std::optional<NodeSet> decl;
  if (any_decl) decl = context_decl;
  return RegressionGraph(max_id, std::move(edges), decl);
}

inline std::string serialize_graph(const RegressionGraph& g) {
  std::ostringstream out;
  for (int i : g.nodes().to_vector()) {
    out << "node " << i;
    if (g.context_decl())
      out << (g.context_decl()->contains(i) ? " context" : " response");
    out << "\n";
  }
  for (const Edge& e : g.edges()) {
    switch (e.type) {
      case EdgeType::Arrow: out << e.a << " -> " << e.b << "\n"; break;
      case EdgeType::Dashed: out << e.a << " ~~ " << e.b << "\n"; break;
      case EdgeType::Full: out << e.a << " -- " << e.b << "\n"; break;
    }
  }
  return out.str();
}

inline RegressionGraph graph_from_json(const nlohmann::json& j) {
  int max_id = 0;
  for (int n : j.value("nodes", std::vector<int>{})) max_id = std::max(max_id, n);
  std::vector<Edge> edges;
  for (const auto& e : j.value("edges", nlohmann::json::array())) {
    std::string kind = e.at("kind").get<std::string>();
    int a = e.at("a").get<int>();
    int b = e.at("b").get<int>();
    max_id = std::max({max_id, a, b});
    if (kind == "arrow") edges.push_back({EdgeType::Arrow, a, b});
    else if (kind == "dashed") edges.push_back({EdgeType::Dashed, a, b});
    else if (kind == "full") edges.push_back({EdgeType::Full, a, b});
    else throw GraphError("unknown edge kind '" + kind + "'");
  }
  std::optional<NodeSet> decl;
  if (j.contains("context")) {
    NodeSet c;
    for (int n : j.at("context").get<std::vector<int>>()) c.add(n);
    decl = c;
  }
  return RegressionGraph(max_id, std::move(edges), decl);
}

inline nlohmann::json graph_to_json(const RegressionGraph& g) {
  nlohmann::json j;
  j["nodes"] = g.nodes().to_vector();
  if (g.context_decl()) j["context"] = g.context_decl()->to_vector();
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges())
    j["edges"].push_back(
        {{"kind", edge_type_name(e.type)}, {"a", e.a}, {"b", e.b}});
  return j;
}

}  // namespace regmark

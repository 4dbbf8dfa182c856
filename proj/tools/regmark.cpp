// Command-line front end: validation, pairwise statements, separation
// queries, verification runs and misc graph utilities.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "regmark/regmark.hpp"

using namespace regmark;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RegressionGraph load_graph(const std::string& path) {
  std::string text = read_text(path);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return graph_from_json(json::parse(text));
  return parse_graph(text);
}

NodeSet parse_set(const std::string& s) {
  NodeSet out;
  if (s.empty() || s == "-") return out;
  std::istringstream in(s);
  std::string id;
  while (std::getline(in, id, ',')) {
    if (id.empty()) continue;
    out.add(std::stoi(id));
  }
  return out;
}

std::size_t closure_cap() {
  if (const char* env = std::getenv("REGMARK_BUDGET"))
    return static_cast<std::size_t>(std::stoull(env));
  return ClosureBudget{}.max_statements;
}

void emit(const json& j, bool as_json, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int cmd_validate(const std::string& path, bool as_json) {
  auto g = load_graph(path);
  auto violations = validate(g);
  json jv = json::array();
  std::ostringstream text;
  for (const auto& v : violations) {
    jv.push_back({{"rule", v.rule}, {"detail", v.detail}});
    text << v.rule << ": " << v.detail << "\n";
  }
  if (violations.empty()) text << "valid\n";
  emit({{"valid", violations.empty()}, {"violations", jv}}, as_json,
       text.str());
  return violations.empty() ? kExitPass : kExitFail;
}

int cmd_pairwise(const std::string& path, const std::string& prop,
                 bool upper, bool as_json) {
  auto p = property_from_name(prop);
  if (!p) throw CLI::ValidationError("--property", "unknown property " + prop);
  auto g = load_graph(path);
  auto ord = valid_ordering(g);
  auto stmts = pairwise_statements(g, ord, *p, {.p4_use_upper_parents = upper});
  json js = json::array();
  for (const auto& s : stmts) js.push_back(s.str());
  emit({{"property", property_name(*p)}, {"statements", js}}, as_json,
       serialize_statements(stmts));
  return kExitPass;
}

int cmd_separate(const std::string& path, const std::string& a,
                 const std::string& b, const std::string& c, bool as_json) {
  auto g = load_graph(path);
  auto r = m_separated(g, parse_set(a), parse_set(b), parse_set(c));
  std::ostringstream text;
  if (r.separated) {
    text << "separated\n";
  } else {
    text << "connected:";
    for (int n : r.witness) text << " " << n;
    text << "\n";
  }
  emit({{"separated", r.separated}, {"witness", r.witness}}, as_json,
       text.str());
  return r.separated ? kExitPass : kExitFail;
}

constexpr Property kAllProps[] = {Property::P1_Past, Property::P2_Anteriors,
                                  Property::P3_JointParents,
                                  Property::P4_ParentsOfLower};

int cmd_verify_theorem1(const RegressionGraph& g, bool as_json) {
  auto ord = valid_ordering(g);
  ClosureBudget budget{.max_statements = closure_cap()};
  json sizes = json::array();
  StatementSet base;
  bool first = true, equal = true, saturated = true;
  for (auto p : kAllProps) {
    auto res = closure(pairwise_statements(g, ord, p), g.nodes(), {}, budget);
    saturated &= res.saturated;
    sizes.push_back(res.statements.size());
    if (first) {
      base = std::move(res.statements);
      first = false;
    } else {
      equal &= res.statements == base;
    }
  }
  std::ostringstream text;
  if (!saturated)
    text << "inconclusive: closure budget exhausted\n";
  else
    text << (equal ? "theorem1: four closures equal (" : "theorem1: FAILED (")
         << base.size() << " statements)\n";
  emit({{"check", "theorem1"},
        {"saturated", saturated},
        {"equal", equal},
        {"sizes", sizes}},
       as_json, text.str());
  if (!saturated) return kExitInconclusive;
  return equal ? kExitPass : kExitFail;
}

int cmd_verify_soundness(const RegressionGraph& g, bool as_json) {
  auto ord = valid_ordering(g);
  json reports = json::array();
  std::ostringstream text;
  bool ok = true;
  for (auto p : kAllProps) {
    auto rep = verify_soundness(g, ord, p);
    ok &= rep.ok();
    reports.push_back(soundness_to_json(rep));
    text << property_name(p) << ": " << (rep.total - rep.failures.size())
         << "/" << rep.total << " separated\n";
  }
  text << (ok ? "soundness: pass\n" : "soundness: FAILED\n");
  emit({{"check", "soundness"}, {"ok", ok}, {"reports", reports}}, as_json,
       text.str());
  return ok ? kExitPass : kExitFail;
}

int cmd_verify_gaussian(const RegressionGraph& g, std::uint64_t seed,
                        double tol, bool as_json) {
  auto ord = valid_ordering(g);
  auto model = generate_model(g, ord, seed);
  json reports = json::array();
  std::ostringstream text;
  bool ok = true;
  for (auto p : kAllProps) {
    auto rep = verify_statements(model, pairwise_statements(g, ord, p), tol);
    ok &= rep.ok();
    reports.push_back(gaussian_report_to_json(rep));
    text << property_name(p) << ": " << rep.held << "/" << rep.checks.size()
         << " hold\n";
  }
  text << (ok ? "gaussian: pass\n" : "gaussian: FAILED\n");
  emit({{"check", "gaussian"},
        {"seed", seed},
        {"graph_id", graph_hash(g)},
        {"ok", ok},
        {"reports", reports}},
       as_json, text.str());
  return ok ? kExitPass : kExitFail;
}

int cmd_order(const std::string& path, bool as_json) {
  auto g = load_graph(path);
  auto ord = valid_ordering(g);
  json comps = json::array();
  std::ostringstream text;
  for (std::size_t k = 0; k < ord.components.size(); ++k) {
    comps.push_back(ord.components[k].nodes.to_vector());
    if (k) text << " | ";
    text << ord.components[k].nodes.str();
  }
  text << "\n";
  emit({{"components", comps}}, as_json, text.str());
  return kExitPass;
}

int cmd_sets(const std::string& path, const std::string& pair, bool as_json) {
  auto ij = parse_set(pair);
  if (ij.size() != 2)
    throw CLI::ValidationError("--pair", "expected two distinct nodes");
  auto g = load_graph(path);
  auto ord = valid_ordering(g);
  auto s = pair_sets(g, ord, ij.min(), ij.max());
  std::ostringstream text;
  text << "par={" << s.par.str() << "} ant={" << s.ant.str() << "} pst={"
       << s.pst.str() << "}\n";
  emit({{"pair", ij.to_vector()},
        {"par", s.par.to_vector()},
        {"ant", s.ant.to_vector()},
        {"pst", s.pst.to_vector()}},
       as_json, text.str());
  return kExitPass;
}

int cmd_saturate(const std::string& path, bool as_json) {
  auto g = load_graph(path);
  auto full = saturate(g, valid_ordering(g));
  emit(graph_to_json(full), as_json, serialize_graph(full));
  return kExitPass;
}

int cmd_random(int nodes, std::uint64_t seed, EdgeDensities dens,
               bool as_json) {
  auto g = random_graph(nodes, seed, dens);
  emit(graph_to_json(g), as_json, serialize_graph(g));
  return kExitPass;
}

int cmd_derive(const std::string& goal, const std::string& premises_path,
               std::size_t budget, bool as_json) {
  auto goal_stmt = parse_statement(goal);
  auto premises = parse_statements(read_text(premises_path));
  auto r = derive(goal_stmt, premises, {}, {.max_statements = budget});
  if (r.budget_exhausted && !r.trace) {
    emit({{"derived", false}, {"inconclusive", true}}, as_json,
         "inconclusive: derivation budget exhausted\n");
    return kExitInconclusive;
  }
  if (!r.trace) {
    emit({{"derived", false}, {"inconclusive", false}}, as_json,
         "not derivable\n");
    return kExitFail;
  }
  std::ostringstream text;
  for (const auto& step : r.trace->steps) {
    text << rule_name(step.rule) << ":";
    for (std::size_t k = 0; k < step.premises.size(); ++k)
      text << (k ? "; " : " ") << step.premises[k].str();
    text << " => " << step.conclusion.str() << "\n";
  }
  text << "derived: " << r.trace->conclusion.str() << "\n";
  json j = trace_to_json(*r.trace);
  j["derived"] = true;
  emit(j, as_json, text.str());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regression-graph Markov property toolkit"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::string path = "-", prop = "p1", a, b, c, pair, goal, premises;
  bool upper = false, theorem1 = false, soundness = false, gaussian = false;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int nodes = 5;
  std::size_t derive_budget = DeriveBudget{}.max_statements;
  EdgeDensities dens;

  auto* v = app.add_subcommand("validate", "check graph well-formedness");
  v->add_option("graph", path)->required();

  auto* pw = app.add_subcommand("pairwise", "emit pairwise statements");
  pw->add_option("graph", path)->required();
  pw->add_option("--property", prop, "p1|p2|p3|p4")->required();
  pw->add_flag("--upper-parents", upper,
               "condition same-component pairs on the later node's parents");

  auto* sep = app.add_subcommand("separate", "path-separation query");
  sep->add_option("graph", path)->required();
  sep->add_option("--a", a)->required();
  sep->add_option("--b", b)->required();
  sep->add_option("--c", c);

  auto* vf = app.add_subcommand("verify", "verification runs");
  vf->add_option("graph", path)->required();
  vf->add_flag("--theorem1", theorem1);
  vf->add_flag("--soundness", soundness);
  vf->add_flag("--gaussian", gaussian);
  vf->add_option("--seed", seed);
  vf->add_option("--tol", tol)->check(CLI::PositiveNumber);

  auto* ord_cmd = app.add_subcommand("order", "print a valid ordering");
  ord_cmd->add_option("graph", path)->required();

  auto* sets_cmd = app.add_subcommand("sets", "par/ant/pst of a pair");
  sets_cmd->add_option("graph", path)->required();
  sets_cmd->add_option("--pair", pair)->required();

  auto* sat = app.add_subcommand("saturate", "emit the completed graph");
  sat->add_option("graph", path)->required();

  auto* rnd = app.add_subcommand("random", "emit a random valid graph");
  rnd->add_option("--nodes", nodes)->required()->check(CLI::Range(1, 64));
  rnd->add_option("--seed", seed);
  rnd->add_option("--dashed", dens.dashed);
  rnd->add_option("--full", dens.full);
  rnd->add_option("--arrow", dens.arrow);

  auto* dv = app.add_subcommand("derive", "search for a proof trace");
  dv->add_option("--goal", goal)->required();
  dv->add_option("--premises", premises)->required();
  dv->add_option("--budget", derive_budget);

  for (auto* sc : {v, pw, sep, vf, ord_cmd, sets_cmd, sat, rnd, dv})
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  bool as_json = format == "json";
  try {
    if (v->parsed()) return cmd_validate(path, as_json);
    if (pw->parsed()) return cmd_pairwise(path, prop, upper, as_json);
    if (sep->parsed()) return cmd_separate(path, a, b, c, as_json);
    if (vf->parsed()) {
      if (theorem1 + soundness + gaussian != 1) {
        std::cerr << "verify: pass exactly one of --theorem1 --soundness "
                     "--gaussian\n";
        return kExitUsage;
      }
      auto g = load_graph(path);
      if (!validate(g).empty()) {
        std::cerr << "verify: graph is not valid\n";
        return kExitFail;
      }
      if (theorem1) return cmd_verify_theorem1(g, as_json);
      if (soundness) return cmd_verify_soundness(g, as_json);
      return cmd_verify_gaussian(g, seed, tol, as_json);
    }
    if (ord_cmd->parsed()) return cmd_order(path, as_json);
    if (sets_cmd->parsed()) return cmd_sets(path, pair, as_json);
    if (sat->parsed()) return cmd_saturate(path, as_json);
    if (rnd->parsed()) return cmd_random(nodes, seed, dens, as_json);
    if (dv->parsed()) return cmd_derive(goal, premises, derive_budget, as_json);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "regmark/random.hpp"
#include "regmark/statements.hpp"

using namespace regmark;
using regmark::testing::figure1;

namespace {

IndependenceStatement stmt(const std::string& s) { return parse_statement(s); }

std::optional<IndependenceStatement> statement_for_pair(const StatementSet& set,
                                                        int i, int j) {
  for (const auto& st : set)
    if ((st.A | st.B) == NodeSet::of({i, j})) return st;
  return std::nullopt;
}

}  // namespace

TEST_CASE("statement canonical form and parsing") {
  auto s = stmt("4 | 2 | 5,6,8,9");
  CHECK(s.A == NodeSet::of({2}));
  CHECK(s.B == NodeSet::of({4}));
  CHECK(s.str() == "2 | 4 | 5,6,8,9");
  CHECK(stmt("1 | 2 | -").C.empty());
  CHECK_THROWS_AS(stmt("1 | 1 | 2"), GraphError);
  CHECK_THROWS_AS(stmt("1 | 2"), GraphError);
}

TEST_CASE("figure 1 statements for pair 2,4 under all four properties") {
  auto g = figure1();
  auto ord = valid_ordering(g);
  auto check = [&](Property p, const std::string& expected) {
    auto set = pairwise_statements(g, ord, p);
    auto st = statement_for_pair(set, 2, 4);
    REQUIRE(st);
    CHECK(st->str() == expected);
  };
  check(Property::P1_Past, "2 | 4 | 5,6,7,8,9");
  check(Property::P2_Anteriors, "2 | 4 | 5,6,8,9");
  check(Property::P3_JointParents, "2 | 4 | 5,6");
  check(Property::P4_ParentsOfLower, "2 | 4 | 5");
}

TEST_CASE("complete graph yields no statements") {
  auto g = figure1();
  auto ord = valid_ordering(g);
  auto full = saturate(g, ord);
  auto ford = valid_ordering(full);
  for (auto p : {Property::P1_Past, Property::P2_Anteriors,
                 Property::P3_JointParents, Property::P4_ParentsOfLower})
    CHECK(pairwise_statements(full, ford, p).empty());
}

TEST_CASE("context pairs condition on the rest of the context set") {
  RegressionGraph g(3, {});  // three isolated nodes, all default context
  auto ord = valid_ordering(g);
  auto set = pairwise_statements(g, ord, Property::P1_Past);
  REQUIRE(set.size() == 3);
  CHECK(set.count(stmt("1 | 2 | 3")));
  CHECK(set.count(stmt("1 | 3 | 2")));
  CHECK(set.count(stmt("2 | 3 | 1")));
}

TEST_CASE("one statement per uncoupled pair") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto g = random_graph(1 + seed % 8, seed);
    auto ord = valid_ordering(g);
    int uncoupled = 0;
    for (int i = 1; i <= g.node_count(); ++i)
      for (int j = i + 1; j <= g.node_count(); ++j)
        uncoupled += !g.coupled(i, j);
    for (auto p : {Property::P1_Past, Property::P2_Anteriors,
                   Property::P3_JointParents, Property::P4_ParentsOfLower})
      CHECK(static_cast<int>(pairwise_statements(g, ord, p).size()) ==
            uncoupled);
  }
}

TEST_CASE("conditioning sets nest: par(i) within par within ant within pst") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto g = random_graph(7, seed);
    auto ord = valid_ordering(g);
    auto uv = resolve_partition(g);
    for (int i = 1; i <= 7; ++i) {
      for (int j = i + 1; j <= 7; ++j) {
        if (g.coupled(i, j)) continue;
        if (uv.context.contains(i) && uv.context.contains(j)) continue;
        int lo = ord.before(i, j) ? i : j;
        auto s = pair_sets(g, ord, i, j);
        NodeSet pl = par(g, lo) - NodeSet::of({i, j});
        CAPTURE(seed, i, j);
        CHECK(pl.subset_of(s.par));
        CHECK(s.par.subset_of(s.ant));
        CHECK(s.ant.subset_of(s.pst));
      }
    }
  }
}

TEST_CASE("P2 and P3 statements do not depend on the ordering") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto g = random_graph(7, seed);
    auto a = valid_ordering(g, TieBreak::SmallestNode);
    auto b = valid_ordering(g, TieBreak::LargestNode);
    CHECK(pairwise_statements(g, a, Property::P2_Anteriors) ==
          pairwise_statements(g, b, Property::P2_Anteriors));
    CHECK(pairwise_statements(g, a, Property::P3_JointParents) ==
          pairwise_statements(g, b, Property::P3_JointParents));
  }
}

TEST_CASE("P4 can switch to the upper node's parents inside a component") {
  auto g = parse_graph("1 ~~ 2\n2 ~~ 3\n4 -> 1\n5 -> 3\n");
  auto ord = valid_ordering(g);
  auto def = statement_for_pair(
      pairwise_statements(g, ord, Property::P4_ParentsOfLower), 1, 3);
  auto alt = statement_for_pair(
      pairwise_statements(g, ord, Property::P4_ParentsOfLower,
                          {.p4_use_upper_parents = true}),
      1, 3);
  REQUIRE(def);
  REQUIRE(alt);
  CHECK(def->C == NodeSet::of({4}));
  CHECK(alt->C == NodeSet::of({5}));
}

TEST_CASE("statement report matches the worked example") {
  auto g = figure1();
  auto rows = statement_report(g, valid_ordering(g));
  bool found = false;
  for (const auto& r : rows) {
    if (r.i == 2 && r.j == 4) {
      found = true;
      CHECK(r.pst == NodeSet::of({5, 6, 7, 8, 9}));
      CHECK(r.ant == NodeSet::of({5, 6, 8, 9}));
      CHECK(r.par_pair == NodeSet::of({5, 6}));
      CHECK(r.par_lower == NodeSet::of({5}));
    }
  }
  CHECK(found);
  CHECK_FALSE(report_to_text(rows).empty());
  CHECK(report_to_json(rows).size() == rows.size());
}

TEST_CASE("statement set serialization round-trips") {
  auto g = figure1();
  auto set = pairwise_statements(g, valid_ordering(g), Property::P2_Anteriors);
  CHECK(parse_statements(serialize_statements(set)) == set);
}

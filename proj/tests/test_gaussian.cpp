#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "regmark/gaussian.hpp"
#include "regmark/separation.hpp"

using namespace regmark;
using regmark::testing::figure1;

namespace {

GaussianModel model_of(const RegressionGraph& g, std::uint64_t seed,
                       TieBreak tie = TieBreak::SmallestNode) {
  return generate_model(g, valid_ordering(g, tie), seed);
}

}  // namespace

TEST_CASE("context-only models") {
  SECTION("single full edge gives a correlated pair") {
    RegressionGraph g(2, {{EdgeType::Full, 1, 2}});
    auto m = model_of(g, 3);
    CHECK(std::abs(m.sigma(0, 1)) > 1e-6);
    CHECK(m.sigma(0, 1) == Catch::Approx(m.sigma(1, 0)));
  }
  SECTION("isolated context nodes are uncorrelated") {
    RegressionGraph g(2, {});
    auto m = model_of(g, 3);
    CHECK(m.sigma(0, 1) == 0.0);
    CHECK(m.sigma(1, 0) == 0.0);
  }
}

TEST_CASE("single arrow produces a generic dependence") {
  RegressionGraph g(2, {{EdgeType::Arrow, 2, 1}});
  auto m = model_of(g, 7);
  auto r = ci_holds(m, NodeSet::of({1}), NodeSet::of({2}), NodeSet());
  CHECK_FALSE(r.holds);
  CHECK(r.max_abs > 1e-3);
}

TEST_CASE("diagonal sigma separates everything") {
  RegressionGraph g(3, {});
  auto m = model_of(g, 1);
  auto r = ci_holds(m, NodeSet::of({1}), NodeSet::of({2}), NodeSet());
  CHECK(r.holds);
  CHECK(r.max_abs == 0.0);
}

TEST_CASE("figure-1 model satisfies the worked example and refutes a fake") {
  auto g = figure1();
  auto m = model_of(g, 1);
  for (const char* s : {"2 | 4 | 5,6,7,8,9", "2 | 4 | 5,6,8,9", "2 | 4 | 5,6",
                        "2 | 4 | 5"}) {
    auto st = parse_statement(s);
    auto r = ci_holds(m, st.A, st.B, st.C);
    CAPTURE(s, r.max_abs);
    CHECK(r.holds);
  }
  auto fake = ci_holds(m, NodeSet::of({2}), NodeSet::of({5}), NodeSet());
  CHECK_FALSE(fake.holds);
  CHECK(fake.max_abs > 1e-3);
}

TEST_CASE("verify_statements summarises per statement") {
  auto g = figure1();
  auto ord = valid_ordering(g);
  auto m = generate_model(g, ord, 5);
  auto rep = verify_statements(m, pairwise_statements(g, ord, Property::P1_Past));
  CHECK(rep.ok());
  CHECK(rep.held == 26);
  CHECK(verify_statements(m, {}).checks.empty());
  StatementSet fake{parse_statement("2 | 5 | -")};
  CHECK_FALSE(verify_statements(m, fake).ok());
}

TEST_CASE("models are positive definite and match the generating equations") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto g = random_graph(1 + seed % 8, seed);
    auto m = model_of(g, seed * 11);
    const int d = g.node_count();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.sigma);
    CAPTURE(seed);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    CHECK((m.sigma - m.sigma.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    // independent route: X = (I-T)^-1 eps
    Eigen::MatrixXd it =
        Eigen::MatrixXd::Identity(d, d) - m.coeffs;
    Eigen::MatrixXd rebuilt =
        it.inverse() * m.noise_cov * it.inverse().transpose();
    CHECK((rebuilt - m.sigma).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("models are deterministic given the seed") {
  auto g = figure1();
  auto a = model_of(g, 42), b = model_of(g, 42);
  CHECK(a.sigma == b.sigma);
  auto c = model_of(g, 43);
  CHECK(a.sigma != c.sigma);
}

TEST_CASE("every pairwise statement holds in every generated model") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto g = random_graph(1 + seed % 8, seed);
    auto ord = valid_ordering(g);
    for (std::uint64_t ms = 1; ms <= 2; ++ms) {
      auto m = generate_model(g, ord, ms);
      for (auto p : {Property::P1_Past, Property::P2_Anteriors,
                     Property::P3_JointParents, Property::P4_ParentsOfLower}) {
        auto rep = verify_statements(m, pairwise_statements(g, ord, p));
        CAPTURE(seed, ms, property_name(p));
        CHECK(rep.ok());
      }
    }
  }
}

TEST_CASE("separated triples vanish numerically") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto g = random_graph(7, seed);
    auto m = model_of(g, seed);
    Rng rng(seed * 31);
    for (int trial = 0; trial < 50; ++trial) {
      int a = 1 + rng.below(7), b = 1 + rng.below(7);
      if (a == b) continue;
      NodeSet C;
      for (int k = 1; k <= 7; ++k)
        if (k != a && k != b && rng.chance(0.4)) C.add(k);
      if (m_separated(g, NodeSet::of({a}), NodeSet::of({b}), C).separated) {
        auto r = ci_holds(m, NodeSet::of({a}), NodeSet::of({b}), C);
        CAPTURE(seed, a, b, C.str(), r.max_abs);
        CHECK(r.holds);
      }
    }
  }
}

TEST_CASE("coupled pairs are generically dependent") {
  int total = 0, dependent = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto g = random_graph(6, seed);
    auto ord = valid_ordering(g);
    auto m = generate_model(g, ord, seed * 7);
    for (const Edge& e : g.edges()) {
      int i = e.type == EdgeType::Arrow ? e.b : std::min(e.a, e.b);
      int j = e.type == EdgeType::Arrow ? e.a : std::max(e.a, e.b);
      NodeSet C = par(g, i) - NodeSet::of({i, j});
      ++total;
      dependent +=
          ci_holds(m, NodeSet::of({i}), NodeSet::of({j}), C, 1e-8).max_abs >
          1e-3;
    }
  }
  REQUIRE(total > 100);
  CHECK(dependent >= total * 95 / 100);
}

TEST_CASE("different orderings both stay Markov") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = random_graph(7, seed);
    for (auto tie : {TieBreak::SmallestNode, TieBreak::LargestNode}) {
      auto ord = valid_ordering(g, tie);
      auto m = generate_model(g, ord, 99);
      auto rep =
          verify_statements(m, pairwise_statements(g, ord, Property::P2_Anteriors));
      CHECK(rep.ok());
    }
  }
}

TEST_CASE("model export carries sigma and provenance") {
  auto g = figure1();
  auto m = model_of(g, 1);
  auto j = model_to_json(m);
  CHECK(j["dimension"] == 9);
  CHECK(j["sigma"].size() == 81);
  CHECK(j["seed"] == 1);
  CHECK(j["graph_id"] == graph_hash(g));
}

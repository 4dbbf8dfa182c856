#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "graph.hpp"
#include "parse.hpp"
#include "random.hpp"
#include "statements.hpp"

namespace regmark {

inline std::uint64_t graph_hash(const RegressionGraph& g) {
  std::uint64_t h = 14695981039346656037ull;
  for (char c : serialize_graph(g)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// Regular Gaussian distribution Markov to a regression graph, built by the
// generating sequence of regressions. Node i maps to row/column i-1.
struct GaussianModel {
  Eigen::MatrixXd sigma;
  // generating pieces: X = coeffs * X + noise, cov(noise) = noise_cov
  // (block diagonal: Lambda per response component, K^-1 on the context)
  Eigen::MatrixXd coeffs;
  Eigen::MatrixXd noise_cov;
  std::uint64_t graph_id = 0;
  std::uint64_t seed = 0;
};

// Builds Sigma component by component, from the highest-order component
// down: the context block is the inverse of a diagonally dominant
// concentration matrix with zeros exactly at missing full lines; each
// response component regresses on its past with coefficients exactly at
// the arrows and a noise covariance with zeros exactly at missing dashed
// lines.
inline GaussianModel generate_model(const RegressionGraph& g,
                                    const ComponentOrdering& ord,
                                    std::uint64_t seed) {
  const int d = g.node_count();
  const Partition uv = resolve_partition(g);
  Rng rng(seed);

  GaussianModel m;
  m.sigma = Eigen::MatrixXd::Zero(d, d);
  m.coeffs = Eigen::MatrixXd::Zero(d, d);
  m.noise_cov = Eigen::MatrixXd::Zero(d, d);
  m.graph_id = graph_hash(g);
  m.seed = seed;

  auto dominant_diagonal = [](Eigen::MatrixXd& mat) {
    for (int r = 0; r < mat.rows(); ++r)
      mat(r, r) = mat.row(r).cwiseAbs().sum() + 1.0;
  };

  // context block: Sigma_vv = K^-1
  std::vector<int> ctx = uv.context.to_vector();
  const int nv = static_cast<int>(ctx.size());
  if (nv > 0) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nv, nv);
    for (int x = 0; x < nv; ++x)
      for (int y = x + 1; y < nv; ++y)
        if (g.full_neighbours(ctx[x]).contains(ctx[y]))
          K(x, y) = K(y, x) = rng.signed_uniform(0.1, 0.4);
    dominant_diagonal(K);
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success)
      throw GraphError("context concentration matrix is not positive definite");
    Eigen::MatrixXd sigma_vv = llt.solve(Eigen::MatrixXd::Identity(nv, nv));
    for (int x = 0; x < nv; ++x)
      for (int y = 0; y < nv; ++y) {
        m.sigma(ctx[x] - 1, ctx[y] - 1) = sigma_vv(x, y);
        m.noise_cov(ctx[x] - 1, ctx[y] - 1) = sigma_vv(x, y);
      }
  }

  // response components, highest order first; their past is always built
  std::vector<int> past;  // node ids, ascending
  for (int i : uv.context.to_vector()) past.push_back(i);
  for (int q = static_cast<int>(ord.components.size()) - 1; q >= 0; --q) {
    const Component& comp = ord.components[q];
    if (comp.nodes.subset_of(uv.context)) continue;
    std::vector<int> resp = comp.nodes.to_vector();
    const int nq = static_cast<int>(resp.size());
    const int np = static_cast<int>(past.size());

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nq, np);
    for (int x = 0; x < nq; ++x)
      for (int y = 0; y < np; ++y)
        if (g.parents(resp[x]).contains(past[y]))
          B(x, y) = rng.signed_uniform(0.3, 0.8);

    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(nq, nq);
    for (int x = 0; x < nq; ++x)
      for (int y = x + 1; y < nq; ++y)
        if (g.dashed_neighbours(resp[x]).contains(resp[y]))
          lambda(x, y) = lambda(y, x) = rng.signed_uniform(0.1, 0.4);
    dominant_diagonal(lambda);

    Eigen::MatrixXd sigma_pp(np, np);
    for (int x = 0; x < np; ++x)
      for (int y = 0; y < np; ++y)
        sigma_pp(x, y) = m.sigma(past[x] - 1, past[y] - 1);

    Eigen::MatrixXd sigma_qp = B * sigma_pp;
    Eigen::MatrixXd sigma_qq = sigma_qp * B.transpose() + lambda;
    for (int x = 0; x < nq; ++x) {
      for (int y = 0; y < nq; ++y) {
        m.sigma(resp[x] - 1, resp[y] - 1) = sigma_qq(x, y);
        m.noise_cov(resp[x] - 1, resp[y] - 1) = lambda(x, y);
      }
      for (int y = 0; y < np; ++y) {
        m.sigma(resp[x] - 1, past[y] - 1) = sigma_qp(x, y);
        m.sigma(past[y] - 1, resp[x] - 1) = sigma_qp(x, y);
        m.coeffs(resp[x] - 1, past[y] - 1) = B(x, y);
      }
    }

    past.insert(past.end(), resp.begin(), resp.end());
    std::sort(past.begin(), past.end());
  }
  return m;
}

struct CiResult {
  bool holds;
  double max_abs;
};

// Conditional cross-covariance Sigma_AB - Sigma_AC Sigma_CC^-1 Sigma_CB;
// the statement holds when its largest entry is below tol.
inline CiResult ci_holds(const GaussianModel& m, NodeSet A, NodeSet B,
                         NodeSet C, double tol = 1e-8) {
  if (!A.disjoint_with(B) || !A.disjoint_with(C) || !B.disjoint_with(C))
    throw GraphError("ci_holds sets must be disjoint");
  auto block = [&](NodeSet rows, NodeSet cols) {
    std::vector<int> r = rows.to_vector(), c = cols.to_vector();
    Eigen::MatrixXd out(r.size(), c.size());
    for (size_t x = 0; x < r.size(); ++x)
      for (size_t y = 0; y < c.size(); ++y)
        out(x, y) = m.sigma(r[x] - 1, c[y] - 1);
    return out;
  };
  Eigen::MatrixXd cross = block(A, B);
  if (!C.empty()) {
    Eigen::LLT<Eigen::MatrixXd> llt(block(C, C));
    if (llt.info() != Eigen::Success)
      throw GraphError("conditioning block is not positive definite");
    cross -= block(A, C) * llt.solve(block(C, B));
  }
  double max_abs = cross.cwiseAbs().maxCoeff();
  return {max_abs < tol, max_abs};
}

struct StatementCheck {
  IndependenceStatement statement;
  bool holds;
  double max_abs;
};

struct GaussianReport {
  std::vector<StatementCheck> checks;
  int held = 0;
  int failed = 0;

  bool ok() const { return failed == 0; }
};

inline GaussianReport verify_statements(const GaussianModel& m,
                                        const StatementSet& statements,
                                        double tol = 1e-8) {
  GaussianReport report;
  for (const auto& st : statements) {
    CiResult r = ci_holds(m, st.A, st.B, st.C, tol);
    report.checks.push_back({st, r.holds, r.max_abs});
    ++(r.holds ? report.held : report.failed);
  }
  return report;
}

inline nlohmann::json model_to_json(const GaussianModel& m) {
  std::vector<double> flat(m.sigma.size());
  for (int r = 0; r < m.sigma.rows(); ++r)
    for (int c = 0; c < m.sigma.cols(); ++c)
      flat[r * m.sigma.cols() + c] = m.sigma(r, c);
  return {{"dimension", m.sigma.rows()},
          {"sigma", flat},
          {"graph_id", m.graph_id},
          {"seed", m.seed}};
}

inline nlohmann::json gaussian_report_to_json(const GaussianReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"statement", c.statement.str()},
                      {"holds", c.holds},
                      {"max_abs", c.max_abs}});
  return {{"held", r.held}, {"failed", r.failed}, {"checks", checks}};
}

}  // namespace regmark

#include "ggm/saem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ggm {

void SaemConfig::validate() const {
  if (k_total < 0) throw DomainError("K must be non-negative");
  if (k1 < 0 || (k_total > 0 && k1 >= k_total)) throw DomainError("K1 must satisfy 0 <= K1 < K");
  if (m_rest < 1 || m_first < m_rest) throw DomainError("sub-chain lengths must satisfy M_first >= M_rest >= 1");
  if (n_warm < 0) throw DomainError("n_warm must be non-negative");
  if (!(init.tau > 0)) throw DomainError("initial tau must be positive");
  if (!(init.r > 0 && init.r < 1)) throw DomainError("initial r must lie in (0, 1)");
}

double step_size(int k, int k1) {
  if (k < 1) throw DomainError("SAEM iterations are numbered from 1");
  return k <= k1 ? 1.0 : 1.0 / static_cast<double>(k - k1);
}

SufficientStats compute_suff_stats(const Graph& g, const Eigen::MatrixXd& sigma) {
  const auto seq = perfect_sequence(g);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NotSPD("sampled covariance is not positive definite");
  const Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
  return {static_cast<double>(clique_size_statistic(seq)), precision.trace(), static_cast<double>(g.edge_count())};
}

SufficientStats sa_update(const SufficientStats& prev, const SufficientStats& sample, double gamma) {
  return {prev.s1 + gamma * (sample.s1 - prev.s1), prev.s2 + gamma * (sample.s2 - prev.s2),
          prev.s3 + gamma * (sample.s3 - prev.s3)};
}

Theta m_step(const SufficientStats& s, double delta, int p, int m) {
  if (!(s.s2 > 0)) throw DegenerateStats("s2 must be positive for the M-step");
  Theta theta;
  theta.tau = ((delta - 1.0) * p + s.s1) / s.s2;
  if (m == 0) {
    theta.r = 0.5;  // no vertex pairs; r does not enter the model
  } else {
    const double r_min = 1.0 / (10.0 * m);
    theta.r = std::clamp(s.s3 / m, r_min, 1.0 - r_min);
  }
  return theta;
}

Graph init_graph_backward(const DatasetStats& stats, const Hyperparams& hp0) {
  PosteriorScorer score(stats, hp0);
  Graph g = Graph::complete(stats.p);
  double current = score(g);
  for (;;) {
    double best = current;
    int best_edge = -1;
    for (int e : legal_deletions(g)) {
      const double s = score(g.toggled(e));
      if (s > best) {
        best = s;
        best_edge = e;
      }
    }
    if (best_edge < 0) return g;
    g = g.toggled(best_edge);
    current = best;
  }
}

SaemResult run_saem(const DatasetStats& stats, const SaemConfig& cfg, const Hyperparams& hp_base, Rng& rng) {
  cfg.validate();
  if (hp_base.phi_mode != PhiMode::scaled_identity) throw DomainError("SAEM estimates tau for Phi = tau I only");
  const bool estimate_r = hp_base.graph_prior == GraphPrior::bernoulli;

  SaemResult result;
  result.theta = cfg.init;
  Hyperparams hp = hp_base;
  hp.tau = cfg.init.tau;
  hp.r = cfg.init.r;
  result.final_graph = init_graph_backward(stats, hp);
  if (cfg.k_total == 0) return result;

  const int p = stats.p;
  const int m = num_pairs(p);
  ChainState state{result.final_graph, 0.0, 0, 0};
  SufficientStats s;
  result.trace.reserve(cfg.k_total);

  for (int k = 1; k <= cfg.k_total; ++k) {
    PosteriorScorer scorer(stats, hp);
    state.log_score = scorer(state.graph);
    const long sub_chain = k <= cfg.n_warm ? cfg.m_first : cfg.m_rest;
    const auto draw = sample_graph_and_sigma(state, scorer, cfg.kernel, sub_chain, rng);
    state = draw.state;

    s = sa_update(s, compute_suff_stats(state.graph, draw.sigma), step_size(k, cfg.k1));
    const Theta next = m_step(s, hp.delta, p, m);
    result.theta.tau = next.tau;
    if (estimate_r) result.theta.r = next.r;

    SaemTraceRow row{k,    result.theta.tau, result.theta.r, s.s1, s.s2, s.s3,
                     static_cast<double>(state.accept_count) / static_cast<double>(state.step_index)};
    for (double v : {row.tau, row.r, row.s1, row.s2, row.s3, row.accept_rate})
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite SAEM state at iteration " << k << ": tau=" << row.tau << " r=" << row.r
            << " s=(" << row.s1 << ", " << row.s2 << ", " << row.s3 << ")";
        throw NonFinite(msg.str());
      }
    result.trace.push_back(row);
    hp.tau = result.theta.tau;
    hp.r = result.theta.r;
  }
  result.final_graph = state.graph;
  return result;
}

}  // namespace ggm

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ggm/graph.hpp"
#include "ggm/hiw.hpp"
#include "ggm/sampler.hpp"

namespace ggm {

/// Running stochastic approximations of the complete-data sufficient statistics:
/// s1 ~ Σ|C|² - Σ|S|², s2 ~ tr(Σ⁻¹), s3 ~ number of edges.
struct SufficientStats {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

struct Theta {
  double tau = 0.001;
  double r = 0.5;
};

struct SaemConfig {
  int k1 = 100;            // iterations with unit step size
  int k_total = 300;       // total iterations K
  long m_first = 500;      // sub-chain length during the warm-up iterations
  long m_rest = 10;        // sub-chain length afterwards
  int n_warm = 5;          // number of warm-up iterations
  Theta init{};
  KernelConfig kernel{};

  void validate() const;
};

/// 1 for k <= k1, then 1/(k - k1).
double step_size(int k, int k1);

SufficientStats compute_suff_stats(const Graph& g, const Eigen::MatrixXd& sigma);

/// s ← s + γ (sample - s), componentwise.
SufficientStats sa_update(const SufficientStats& prev, const SufficientStats& sample, double gamma);

/// Closed-form maximiser of the complete log-likelihood:
/// τ = ((δ-1)p + s1)/s2, r = s3/m clamped to [1/(10m), 1 - 1/(10m)].
/// Throws DegenerateStats when s2 <= 0.
Theta m_step(const SufficientStats& s, double delta, int p, int m);

/// Greedy backward selection from the complete graph: repeatedly apply the legal
/// deletion with the largest posterior-score gain until none improves.
Graph init_graph_backward(const DatasetStats& stats, const Hyperparams& hp0);

struct SaemTraceRow {
  int iter = 0;
  double tau = 0.0;
  double r = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double accept_rate = 0.0;
};

struct SaemResult {
  Theta theta;
  std::vector<SaemTraceRow> trace;
  Graph final_graph;
};

/// SAEM-MCMC estimate of (τ, r) with Φ = τ I_p. `hp_base` fixes δ and the graph
/// prior family; r is estimated only under the Bernoulli prior, otherwise it
/// stays at cfg.init.r.
SaemResult run_saem(const DatasetStats& stats, const SaemConfig& cfg, const Hyperparams& hp_base, Rng& rng);

}  // namespace ggm

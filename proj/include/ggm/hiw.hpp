#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "ggm/errors.hpp"
#include "ggm/graph.hpp"

namespace ggm {

using Rng = std::mt19937_64;

enum class PhiMode { scaled_identity, empirical_gprior };
enum class GraphPrior { bernoulli, beta_binomial, uniform };

/// Prior hyperparameters of the HIW / graph prior pair.
///
/// Inverse-Wishart blocks use the degrees-of-freedom convention where a clique
/// C has density proportional to det(Σ_C)^{-(delta + 2|C|)/2} exp(-tr(Σ_C^{-1} Φ_C)/2);
/// the textbook parameter is nu = delta + |C| - 1.
struct Hyperparams {
  double delta = 1.0;
  PhiMode phi_mode = PhiMode::scaled_identity;
  double tau = 1.0;
  GraphPrior graph_prior = GraphPrior::bernoulli;
  double r = 0.5;

  void validate() const;
};

/// Sufficient summaries of a (centred) data matrix.
struct DatasetStats {
  int n = 0;
  int p = 0;
  Eigen::MatrixXd scatter;                      // S_Y = sum_i y_i y_i^T
  std::optional<Eigen::MatrixXd> inv_empirical;  // K = (S_Y / n)^{-1}

  /// Rows of `data` are observations. K is filled when S_Y is positive definite.
  static DatasetStats from_data(const Eigen::MatrixXd& data);
  static DatasetStats from_scatter(const Eigen::MatrixXd& scatter, int n);

  /// Throws SingularScatter if K is unavailable.
  const Eigen::MatrixXd& precision() const;
};

// --- special functions -------------------------------------------------------

/// log Γ_v(a) = v(v-1)/4 log π + Σ_{j=1..v} log Γ(a + (1-j)/2).
template <typename Scalar>
Scalar log_multivariate_gamma(int v, Scalar a) {
  if (v < 0) throw DomainError("multivariate gamma dimension must be non-negative");
  if (v > 0 && !(a + Scalar(1 - v) / 2 > 0))
    throw DomainError("multivariate gamma argument out of domain: a + (1 - v)/2 <= 0");
  Scalar out = Scalar(v) * Scalar(v - 1) / 4 * std::log(std::numbers::pi_v<Scalar>);
  for (int j = 1; j <= v; ++j) out += std::lgamma(a + Scalar(1 - j) / 2);
  return out;
}

/// log det of an SPD matrix via its Cholesky factor; throws NotSPD.
template <typename Derived>
typename Derived::Scalar log_det_spd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0) return Scalar(0);
  Eigen::LLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(a.derived());
  if (llt.info() != Eigen::Success) throw NotSPD("matrix is not symmetric positive definite");
  const auto diag = llt.matrixLLT().diagonal();
  if ((diag.array() <= Scalar(0)).any()) throw NotSPD("matrix is not symmetric positive definite");
  return Scalar(2) * diag.array().log().sum();
}

/// Log normalising constant of one inverse-Wishart block:
/// ((|C|+δ-1)/2) log det(Φ_C/2) - log Γ_{|C|}((|C|+δ-1)/2). Zero for an empty block.
template <typename Derived>
typename Derived::Scalar log_iw_constant(const Eigen::MatrixBase<Derived>& phi_c,
                                         typename Derived::Scalar delta) {
  using Scalar = typename Derived::Scalar;
  const int c = static_cast<int>(phi_c.rows());
  if (c == 0) return Scalar(0);
  if (!(delta > 0)) throw DomainError("delta must be positive");
  const Scalar a = (Scalar(c) + delta - Scalar(1)) / Scalar(2);
  const Scalar log_det_half = log_det_spd(phi_c) - Scalar(c) * std::log(Scalar(2));
  return a * log_det_half - log_multivariate_gamma(c, a);
}

/// Principal submatrix on the vertex set `s` (ascending order).
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, VertexSet s);

// --- HIW constants, likelihood, posterior ------------------------------------

/// Σ_C log h^{IW}(Φ_C) - Σ_S log h^{IW}(Φ_S) along a perfect sequence.
double log_hiw_constant(const PerfectSequence& seq, double delta, const Eigen::MatrixXd& phi);
double log_hiw_constant(const Graph& g, double delta, const Eigen::MatrixXd& phi);

/// Φ implied by the hyperparameters: τ I_p or S_Y / n.
Eigen::MatrixXd prior_location(const Hyperparams& hp, const DatasetStats& stats);

/// log f(Y | G) = log h_G(δ, Φ) - log h_G(δ+n, Φ+S_Y) - (np/2) log(2π).
double log_marginal_likelihood(const Graph& g, const DatasetStats& stats, const Hyperparams& hp);

/// Unnormalised log π(G): Bernoulli k log r + (m-k) log(1-r), beta-binomial
/// -log C(m, k), or 0 for the uniform prior.
double log_graph_prior(const Graph& g, const Hyperparams& hp);

/// log h_G(δ, Φ) - log h_G(δ+n, Φ+S_Y) + log π(G).
double log_posterior_score(const Graph& g, const DatasetStats& stats, const Hyperparams& hp);

/// Posterior scorer with a per-instance memo keyed by graph. Not thread-safe:
/// give each chain its own scorer.
class PosteriorScorer {
 public:
  PosteriorScorer(const DatasetStats& stats, const Hyperparams& hp);

  double operator()(const Graph& g);
  /// Recomputes without touching the memo.
  double fresh(const Graph& g) const;

  const DatasetStats& stats() const { return *stats_; }
  const Hyperparams& hyperparams() const { return hp_; }
  const Eigen::MatrixXd& prior_phi() const { return phi_; }
  const Eigen::MatrixXd& posterior_phi() const { return phi_post_; }
  std::size_t cache_size() const { return cache_.size(); }

 private:
  const DatasetStats* stats_;
  Hyperparams hp_;
  Eigen::MatrixXd phi_;
  Eigen::MatrixXd phi_post_;
  std::unordered_map<Graph, double, GraphHash> cache_;
};

// --- sampling -----------------------------------------------------------------

/// Σ ~ IW(δ, Φ) in the block convention above (textbook ν = δ + dim - 1).
Eigen::MatrixXd sample_inverse_wishart(double delta, const Eigen::MatrixXd& phi, Rng& rng);

/// Σ ~ HIW_G(δ, Φ): clique marginals IW(δ, Φ_C) and (Σ^{-1})_{ij} = 0 off the edges.
Eigen::MatrixXd sample_hiw(const Graph& g, double delta, const Eigen::MatrixXd& phi, Rng& rng);

struct SimulatedDataset {
  Eigen::MatrixXd data;   // n x p, rows are observations
  Eigen::MatrixXd sigma;  // the covariance the rows were drawn from
  DatasetStats stats;     // computed from the raw rows
};

/// Σ ~ HIW_G(δ, τ I_p), then n rows y ~ N_p(0, Σ).
SimulatedDataset simulate_dataset(const Graph& g, double tau, double delta, int n, Rng& rng);

}  // namespace ggm

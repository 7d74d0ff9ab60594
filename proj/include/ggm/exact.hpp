#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ggm/graph.hpp"
#include "ggm/hiw.hpp"
#include "ggm/sampler.hpp"

namespace ggm {

/// Numerically stable log(Σ exp(x_i)); -inf for an empty range.
double log_sum_exp(std::span<const double> x);

/// All decomposable graphs on p <= 8 vertices in ascending ID order.
std::vector<Graph> enumerate_decomposable(int p);

struct PosteriorEntry {
  Graph graph;
  int k_edges = 0;
  double log_score = 0.0;
  double probability = 0.0;
};

/// Exact posterior over every decomposable graph, sorted by probability
/// (descending, ties by ascending graph ID).
struct PosteriorTable {
  int p = 0;
  std::vector<PosteriorEntry> entries;
  double normalizer = 0.0;  // log Σ exp(score)

  double probability_of(const Graph& g) const;
  /// Posterior inclusion probability of every vertex pair, as a p x p matrix.
  Eigen::MatrixXd edge_marginals() const;
};

inline constexpr int kMaxExactVertices = 6;

PosteriorTable exact_posterior(const DatasetStats& stats, const Hyperparams& hp);

struct MleGrid {
  std::vector<double> tau;
  std::vector<double> r;

  /// Log-spaced τ over [1e-3, 1e2] (60 points), linear r over [0.02, 0.98] (49 points).
  static MleGrid standard();
  static std::vector<double> log_spaced(double lo, double hi, int count);
  static std::vector<double> linear(double lo, double hi, int count);
};

/// Exhaustive evaluation of the marginal likelihood of θ = (τ, r):
/// log Σ_G h_G(δ, τI) / h_G(δ+n, τI+S_Y) r^k (1-r)^{m-k} - (np/2) log 2π.
struct MleSurface {
  double tau = 0.0;
  double r = 0.0;
  double max_log_lik = 0.0;
  std::size_t tau_index = 0;
  std::size_t r_index = 0;
  MleGrid grid;
  Eigen::MatrixXd log_lik;  // rows follow grid.tau, columns grid.r
};

inline constexpr int kMaxMleVertices = 5;

MleSurface exact_marginal_mle(const DatasetStats& stats, double delta, const MleGrid& grid = MleGrid::standard());

struct RelativeError {
  Graph graph;
  double exact = 0.0;
  double estimate = 0.0;
  double percent = 0.0;  // (estimate - exact) / exact * 100
};

struct ChainComparison {
  double total_variation = 0.0;
  std::vector<RelativeError> errors;  // graphs with exact probability >= threshold
  double median_abs_error = 0.0;      // median |percent| over `errors`
};

ChainComparison chain_vs_exact(std::span<const Graph> visits, const PosteriorTable& table, double threshold = 0.001);
ChainComparison chain_vs_exact(std::span<const VisitRecord> visits, const PosteriorTable& table,
                               double threshold = 0.001);

}  // namespace ggm

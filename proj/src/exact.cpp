#include "ggm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace ggm {

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double hi = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double v : x) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

std::vector<Graph> enumerate_decomposable(int p) {
  std::vector<Graph> out;
  for_each_decomposable(p, [&](const Graph& g) { out.push_back(g); });
  return out;
}

double PosteriorTable::probability_of(const Graph& g) const {
  for (const auto& e : entries)
    if (e.graph == g) return e.probability;
  return 0.0;
}

Eigen::MatrixXd PosteriorTable::edge_marginals() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  for (const auto& e : entries)
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (e.graph.has_edge(i, j)) {
          out(i, j) += e.probability;
          out(j, i) += e.probability;
        }
  return out;
}

PosteriorTable exact_posterior(const DatasetStats& stats, const Hyperparams& hp) {
  if (stats.p > kMaxExactVertices)
    throw TooLarge("exact posterior supports p <= " + std::to_string(kMaxExactVertices) + ", got " +
                   std::to_string(stats.p));
  PosteriorScorer scorer(stats, hp);
  PosteriorTable table;
  table.p = stats.p;
  std::vector<double> scores;
  for_each_decomposable(stats.p, [&](const Graph& g) {
    const double s = scorer.fresh(g);
    table.entries.push_back({g, g.edge_count(), s, 0.0});
    scores.push_back(s);
  });
  table.normalizer = log_sum_exp(scores);
  for (auto& e : table.entries) e.probability = std::exp(e.log_score - table.normalizer);
  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const PosteriorEntry& a, const PosteriorEntry& b) { return a.probability > b.probability; });
  return table;
}

MleGrid MleGrid::standard() { return {log_spaced(1e-3, 1e2, 60), linear(0.02, 0.98, 49)}; }

std::vector<double> MleGrid::log_spaced(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = count == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
  return out;
}

std::vector<double> MleGrid::linear(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return out;
}

MleSurface exact_marginal_mle(const DatasetStats& stats, double delta, const MleGrid& grid) {
  if (stats.p > kMaxMleVertices)
    throw TooLarge("exact marginal MLE supports p <= " + std::to_string(kMaxMleVertices) + ", got " +
                   std::to_string(stats.p));
  if (grid.tau.empty() || grid.r.empty()) throw DomainError("MLE grid must be non-empty");
  const int p = stats.p;
  const int m = num_pairs(p);
  const auto graphs = enumerate_decomposable(p);
  std::vector<PerfectSequence> seqs;
  seqs.reserve(graphs.size());
  for (const auto& g : graphs) seqs.push_back(perfect_sequence(g));

  MleSurface out;
  out.grid = grid;
  out.log_lik.resize(static_cast<Eigen::Index>(grid.tau.size()), static_cast<Eigen::Index>(grid.r.size()));
  const double log_2pi_term = 0.5 * stats.n * p * std::log(2.0 * std::numbers::pi);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
  std::vector<double> ratio(graphs.size());
  std::vector<double> terms(graphs.size());
  out.max_log_lik = -std::numeric_limits<double>::infinity();

  for (std::size_t a = 0; a < grid.tau.size(); ++a) {
    const Eigen::MatrixXd phi = grid.tau[a] * eye;
    const Eigen::MatrixXd phi_post = phi + stats.scatter;
    for (std::size_t g = 0; g < graphs.size(); ++g)
      ratio[g] = log_hiw_constant(seqs[g], delta, phi) - log_hiw_constant(seqs[g], delta + stats.n, phi_post);
    for (std::size_t b = 0; b < grid.r.size(); ++b) {
      const double r = grid.r[b];
      for (std::size_t g = 0; g < graphs.size(); ++g) {
        const int k = graphs[g].edge_count();
        terms[g] = ratio[g] + k * std::log(r) + (m - k) * std::log1p(-r);
      }
      const double ll = log_sum_exp(terms) - log_2pi_term;
      out.log_lik(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = ll;
      if (ll > out.max_log_lik) {
        out.max_log_lik = ll;
        out.tau_index = a;
        out.r_index = b;
      }
    }
  }
  out.tau = grid.tau[out.tau_index];
  out.r = grid.r[out.r_index];
  return out;
}

ChainComparison chain_vs_exact(std::span<const Graph> visits, const PosteriorTable& table, double threshold) {
  if (visits.empty()) throw DomainError("visit log is empty");
  for (const auto& g : visits)
    if (g.num_vertices() != table.p)
      throw MismatchedModel("visit log has p=" + std::to_string(g.num_vertices()) + " but the table has p=" +
                            std::to_string(table.p));
  std::unordered_map<Graph, long, GraphHash> counts;
  for (const auto& g : visits) ++counts[g];
  const double total = static_cast<double>(visits.size());

  ChainComparison out;
  double tv = 0.0;
  double covered = 0.0;
  for (const auto& e : table.entries) {
    const auto it = counts.find(e.graph);
    const double estimate = it == counts.end() ? 0.0 : it->second / total;
    covered += estimate;
    tv += std::abs(estimate - e.probability);
    if (e.probability >= threshold)
      out.errors.push_back({e.graph, e.probability, estimate, (estimate - e.probability) / e.probability * 100.0});
  }
  // Mass on graphs outside the table (cannot happen for a decomposable chain).
  tv += std::max(0.0, 1.0 - covered);
  out.total_variation = 0.5 * tv;

  if (!out.errors.empty()) {
    std::vector<double> abs_err;
    for (const auto& e : out.errors) abs_err.push_back(std::abs(e.percent));
    std::sort(abs_err.begin(), abs_err.end());
    const std::size_t n = abs_err.size();
    out.median_abs_error = n % 2 ? abs_err[n / 2] : 0.5 * (abs_err[n / 2 - 1] + abs_err[n / 2]);
  }
  return out;
}

ChainComparison chain_vs_exact(std::span<const VisitRecord> visits, const PosteriorTable& table, double threshold) {
  std::vector<Graph> graphs;
  graphs.reserve(visits.size());
  for (const auto& v : visits) graphs.push_back(v.graph);
  return chain_vs_exact(graphs, table, threshold);
}

}  // namespace ggm

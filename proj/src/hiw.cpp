#include "ggm/hiw.hpp"

#include <string>

namespace ggm {

namespace {

std::vector<Eigen::Index> indices(VertexSet s) {
  std::vector<Eigen::Index> out;
  for (int v : set_members(s)) out.push_back(v);
  return out;
}

Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& a, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw NotSPD(std::string(what) + " is not symmetric positive definite");
  return llt;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return (a + a.transpose()) / 2; }

Eigen::MatrixXd standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = normal(rng);
  return z;
}

}  // namespace

void Hyperparams::validate() const {
  if (!(delta > 0)) throw DomainError("delta must be > 0, got " + std::to_string(delta));
  if (phi_mode == PhiMode::scaled_identity && !(tau > 0))
    throw DomainError("tau must be > 0, got " + std::to_string(tau));
  if (graph_prior == GraphPrior::bernoulli && !(r > 0 && r < 1))
    throw DomainError("r must lie in (0, 1), got " + std::to_string(r));
}

DatasetStats DatasetStats::from_data(const Eigen::MatrixXd& data) {
  return from_scatter(symmetrize(data.transpose() * data), static_cast<int>(data.rows()));
}

DatasetStats DatasetStats::from_scatter(const Eigen::MatrixXd& scatter, int n) {
  if (scatter.rows() != scatter.cols()) throw DomainError("scatter matrix must be square");
  if (n < 0) throw DomainError("sample size must be non-negative");
  DatasetStats stats;
  stats.n = n;
  stats.p = static_cast<int>(scatter.rows());
  stats.scatter = scatter;
  if (n > 0) {
    const Eigen::MatrixXd cov = scatter / n;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-13)
      stats.inv_empirical = symmetrize(llt.solve(Eigen::MatrixXd::Identity(stats.p, stats.p)));
  }
  return stats;
}

const Eigen::MatrixXd& DatasetStats::precision() const {
  if (!inv_empirical) throw SingularScatter("scatter matrix S_Y is not invertible; K is unavailable");
  return *inv_empirical;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, VertexSet s) {
  const auto idx = indices(s);
  return a(idx, idx);
}

double log_hiw_constant(const PerfectSequence& seq, double delta, const Eigen::MatrixXd& phi) {
  double out = 0.0;
  for (VertexSet c : seq.cliques) out += log_iw_constant(submatrix(phi, c), delta);
  for (VertexSet s : seq.separators) out -= log_iw_constant(submatrix(phi, s), delta);
  return out;
}

double log_hiw_constant(const Graph& g, double delta, const Eigen::MatrixXd& phi) {
  if (phi.rows() != g.num_vertices() || phi.cols() != g.num_vertices())
    throw DomainError("location matrix dimension does not match the graph");
  return log_hiw_constant(perfect_sequence(g), delta, phi);
}

Eigen::MatrixXd prior_location(const Hyperparams& hp, const DatasetStats& stats) {
  switch (hp.phi_mode) {
    case PhiMode::scaled_identity:
      return hp.tau * Eigen::MatrixXd::Identity(stats.p, stats.p);
    case PhiMode::empirical_gprior:
      if (stats.n == 0) throw DomainError("empirical g-prior needs n > 0");
      return stats.scatter / stats.n;
  }
  throw DomainError("unknown phi mode");
}

double log_marginal_likelihood(const Graph& g, const DatasetStats& stats, const Hyperparams& hp) {
  hp.validate();
  const auto seq = perfect_sequence(g);
  const Eigen::MatrixXd phi = prior_location(hp, stats);
  const double n = stats.n;
  return log_hiw_constant(seq, hp.delta, phi) - log_hiw_constant(seq, hp.delta + n, phi + stats.scatter) -
         0.5 * n * stats.p * std::log(2.0 * std::numbers::pi);
}

double log_graph_prior(const Graph& g, const Hyperparams& hp) {
  const int m = g.num_pairs();
  const int k = g.edge_count();
  switch (hp.graph_prior) {
    case GraphPrior::bernoulli:
      return k * std::log(hp.r) + (m - k) * std::log1p(-hp.r);
    case GraphPrior::beta_binomial:
      return -(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0));
    case GraphPrior::uniform:
      return 0.0;
  }
  return 0.0;
}

double log_posterior_score(const Graph& g, const DatasetStats& stats, const Hyperparams& hp) {
  return PosteriorScorer(stats, hp).fresh(g);
}

PosteriorScorer::PosteriorScorer(const DatasetStats& stats, const Hyperparams& hp)
    : stats_(&stats), hp_(hp), phi_(prior_location(hp, stats)), phi_post_(phi_ + stats.scatter) {
  hp_.validate();
}

double PosteriorScorer::operator()(const Graph& g) {
  if (auto it = cache_.find(g); it != cache_.end()) return it->second;
  const double score = fresh(g);
  cache_.emplace(g, score);
  return score;
}

double PosteriorScorer::fresh(const Graph& g) const {
  if (g.num_vertices() != stats_->p) throw DomainError("graph and dataset dimensions differ");
  const auto seq = perfect_sequence(g);
  return log_hiw_constant(seq, hp_.delta, phi_) - log_hiw_constant(seq, hp_.delta + stats_->n, phi_post_) +
         log_graph_prior(g, hp_);
}

Eigen::MatrixXd sample_inverse_wishart(double delta, const Eigen::MatrixXd& phi, Rng& rng) {
  if (!(delta > 0)) throw DomainError("delta must be positive");
  const Eigen::Index d = phi.rows();
  if (d == 0) return Eigen::MatrixXd(0, 0);
  const double nu = delta + static_cast<double>(d) - 1.0;

  // Bartlett: Ω = L A Aᵀ Lᵀ ~ W(ν, Φ⁻¹), Σ = Ω⁻¹.
  const Eigen::MatrixXd phi_inv = cholesky(phi, "IW location").solve(Eigen::MatrixXd::Identity(d, d));
  const Eigen::MatrixXd l = cholesky(symmetrize(phi_inv), "inverse IW location").matrixL();
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    std::chi_squared_distribution<double> chi2(nu - static_cast<double>(i));
    a(i, i) = std::sqrt(chi2(rng));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = normal(rng);
  }
  const Eigen::MatrixXd t = l * a;
  const Eigen::MatrixXd t_inv =
      t.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(d, d));
  return symmetrize(t_inv.transpose() * t_inv);
}

Eigen::MatrixXd sample_hiw(const Graph& g, double delta, const Eigen::MatrixXd& phi, Rng& rng) {
  const int p = g.num_vertices();
  if (phi.rows() != p || phi.cols() != p) throw DomainError("location matrix dimension does not match the graph");
  const auto seq = perfect_sequence(g);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(p, p);
  if (p == 0) return sigma;

  const auto first = indices(seq.cliques.front());
  sigma(first, first) = sample_inverse_wishart(delta, phi(first, first), rng);
  VertexSet placed = seq.cliques.front();

  // Each later clique C = R ∪ S: draw Σ_{R·S} and the regression B = Σ_RS Σ_SS⁻¹
  // from their IW / matrix-normal conditionals, then extend Σ so that R is
  // independent of the already placed vertices given S.
  for (std::size_t i = 1; i < seq.cliques.size(); ++i) {
    const VertexSet sep = seq.separators[i - 1];
    const VertexSet resid = seq.cliques[i] & ~sep;
    const auto r = indices(resid);
    const auto s = indices(sep);
    const double block_delta = delta + set_size(sep);

    if (s.empty()) {
      sigma(r, r) = sample_inverse_wishart(block_delta, phi(r, r), rng);
    } else {
      const Eigen::MatrixXd psi_ss = phi(s, s);
      const auto llt_ss = cholesky(psi_ss, "separator block of the location matrix");
      const Eigen::MatrixXd psi_ss_inv = symmetrize(llt_ss.solve(Eigen::MatrixXd::Identity(s.size(), s.size())));
      const Eigen::MatrixXd mean = phi(r, s) * psi_ss_inv;
      const Eigen::MatrixXd psi_cond = symmetrize(phi(r, r) - mean * phi(s, r));
      const Eigen::MatrixXd sigma_cond = sample_inverse_wishart(block_delta, psi_cond, rng);

      const Eigen::MatrixXd l_r = cholesky(sigma_cond, "conditional covariance").matrixL();
      const Eigen::MatrixXd l_s = cholesky(psi_ss_inv, "separator precision").matrixL();
      const Eigen::MatrixXd b =
          mean + l_r * standard_normal_matrix(static_cast<Eigen::Index>(r.size()),
                                              static_cast<Eigen::Index>(s.size()), rng) *
                     l_s.transpose();

      const auto prev = indices(placed);
      const Eigen::MatrixXd cross = b * sigma(s, prev);
      sigma(r, prev) = cross;
      sigma(prev, r) = cross.transpose();
      sigma(r, r) = symmetrize(sigma_cond + b * sigma(s, s) * b.transpose());
    }
    placed |= resid;
  }
  return sigma;
}

SimulatedDataset simulate_dataset(const Graph& g, double tau, double delta, int n, Rng& rng) {
  if (n < 1) throw DomainError("simulate_dataset needs n >= 1");
  if (!(tau > 0)) throw DomainError("tau must be positive");
  const int p = g.num_vertices();
  SimulatedDataset out;
  out.sigma = sample_hiw(g, delta, tau * Eigen::MatrixXd::Identity(p, p), rng);
  const Eigen::MatrixXd l = cholesky(out.sigma, "simulated covariance").matrixL();
  out.data = standard_normal_matrix(n, p, rng) * l.transpose();
  out.stats = DatasetStats::from_data(out.data);
  return out;
}

}  // namespace ggm

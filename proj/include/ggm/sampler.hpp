#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ggm/graph.hpp"
#include "ggm/hiw.hpp"

namespace ggm {

enum class KernelMode { add_delete, data_driven, alternate };

struct KernelConfig {
  KernelMode mode = KernelMode::add_delete;
  /// Data-driven weights are clamped into [weight_floor, 1/weight_floor].
  double weight_floor = 1e-12;
};

struct ChainState {
  Graph graph;
  double log_score = 0.0;
  long step_index = 0;
  long accept_count = 0;
};

ChainState make_chain_state(const Graph& g, PosteriorScorer& scorer);

enum class MoveKind { add, remove };

/// Data-driven proposal weights over `edges`: |K_ij| for additions, 1/|K_ij| for
/// deletions, clamped into [floor, 1/floor]. If every raw weight of a non-empty
/// set is below the floor the weights fall back to uniform (all ones).
std::vector<double> move_weights(std::span<const int> edges, MoveKind kind, const Eigen::MatrixXd& precision,
                                 double weight_floor, bool* degenerate = nullptr);

/// log q(from | to) - log q(to | from) for the uniform add/delete proposal.
double add_delete_log_proposal_ratio(const Graph& from, const Graph& to);

/// Same ratio for the data-driven proposal, using fully normalised weight
/// masses on both the current and the proposed graph.
double data_driven_log_proposal_ratio(const Graph& from, const Graph& to, const Eigen::MatrixXd& precision,
                                      double weight_floor);

/// One Metropolis-Hastings step with the uniform add/delete proposal.
ChainState add_delete_step(const ChainState& state, PosteriorScorer& scorer, Rng& rng);

/// One Metropolis-Hastings step with the data-driven proposal built from K.
ChainState data_driven_step(const ChainState& state, PosteriorScorer& scorer, const KernelConfig& cfg, Rng& rng);

/// Dispatches on cfg.mode; alternate uses add/delete on even step indices and
/// data-driven on odd ones.
ChainState kernel_step(const ChainState& state, PosteriorScorer& scorer, const KernelConfig& cfg, Rng& rng);

struct VisitRecord {
  long step = 0;
  Graph graph;
  double log_score = 0.0;
  bool accepted = false;
};

struct ChainRun {
  ChainState final_state;
  std::vector<VisitRecord> visits;   // one record per step, state after the step
  std::vector<double> running_rate;  // accept_count / steps so far
};

ChainRun run_chain(const Graph& init, long steps, PosteriorScorer& scorer, const KernelConfig& cfg, Rng& rng,
                   bool record = true);
/// Continues an existing chain; step indices keep counting from `state`.
ChainRun run_chain(const ChainState& state, long steps, PosteriorScorer& scorer, const KernelConfig& cfg, Rng& rng,
                   bool record = true);

struct GraphSigmaDraw {
  ChainState state;
  Eigen::MatrixXd sigma;
};

/// Advances the graph chain `steps` times, then draws Σ ~ HIW_G(δ+n, Φ+S_Y) on the
/// final graph.
GraphSigmaDraw sample_graph_and_sigma(const ChainState& state, PosteriorScorer& scorer, const KernelConfig& cfg,
                                      long steps, Rng& rng);

}  // namespace ggm

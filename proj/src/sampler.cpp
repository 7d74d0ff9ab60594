#include "ggm/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace ggm {

namespace {

std::vector<int> legal_moves(const Graph& g, MoveKind kind) {
  return kind == MoveKind::add ? legal_additions(g) : legal_deletions(g);
}

MoveKind reverse(MoveKind kind) { return kind == MoveKind::add ? MoveKind::remove : MoveKind::add; }

MoveKind direction_of(const Graph& from, const Graph& to) {
  const int diff = to.edge_count() - from.edge_count();
  if (diff != 1 && diff != -1) throw DomainError("graphs do not differ by a single edge");
  return diff == 1 ? MoveKind::add : MoveKind::remove;
}

int toggled_edge(const Graph& from, const Graph& to) {
  const int p = from.num_vertices();
  for (int i = 0; i < p; ++i) {
    const VertexSet diff = from.neighbors(i) ^ to.neighbors(i);
    if (diff) return edge_index(i, __builtin_ctz(diff), p);
  }
  throw DomainError("graphs are identical");
}

std::size_t position_of(std::span<const int> edges, int e) {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i] == e) return i;
  throw DomainError("edge is not a legal move");
}

double sum(std::span<const double> w) {
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

std::size_t draw_weighted(std::span<const double> w, double total, Rng& rng) {
  const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (target < acc) return i;
  }
  return w.size() - 1;
}

// log q(back) - log q(forward) with q = w / W; unit weights give log W_f - log W_b exactly
double log_mass_ratio(double total_forward, double total_backward, double w_forward, double w_backward) {
  return (std::log(total_forward) - std::log(total_backward)) + (std::log(w_backward) - std::log(w_forward));
}

double log_count_ratio(std::size_t forward, std::size_t backward) {
  return std::log(static_cast<double>(forward)) - std::log(static_cast<double>(backward));
}

bool metropolis_accept(double log_alpha, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return log_alpha >= 0.0 || std::log(u) < log_alpha;
}

ChainState finish(const ChainState& state, const Graph& proposed, double proposed_score, double log_alpha,
                  Rng& rng) {
  ChainState next = state;
  ++next.step_index;
  if (metropolis_accept(log_alpha, rng)) {
    next.graph = proposed;
    next.log_score = proposed_score;
    ++next.accept_count;
  }
  return next;
}

}  // namespace

ChainState make_chain_state(const Graph& g, PosteriorScorer& scorer) {
  if (!is_decomposable(g)) throw NotDecomposable("initial graph is not decomposable");
  return ChainState{g, scorer(g), 0, 0};
}

std::vector<double> move_weights(std::span<const int> edges, MoveKind kind, const Eigen::MatrixXd& precision,
                                 double weight_floor, bool* degenerate) {
  const int p = static_cast<int>(precision.rows());
  std::vector<double> w(edges.size());
  bool all_small = !edges.empty();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [a, b] = edge_endpoints(edges[i], p);
    const double k = std::abs(precision(a, b));
    w[i] = kind == MoveKind::add ? k : 1.0 / k;
    if (!(w[i] < weight_floor)) all_small = false;
  }
  if (degenerate) *degenerate = all_small;
  if (all_small) {
    std::fill(w.begin(), w.end(), 1.0);
    return w;
  }
  if (weight_floor > 0)
    for (double& x : w) x = std::clamp(x, weight_floor, 1.0 / weight_floor);
  return w;
}

double add_delete_log_proposal_ratio(const Graph& from, const Graph& to) {
  const MoveKind kind = direction_of(from, to);
  const auto forward = legal_moves(from, kind);
  const auto backward = legal_moves(to, reverse(kind));
  return log_count_ratio(forward.size(), backward.size());
}

double data_driven_log_proposal_ratio(const Graph& from, const Graph& to, const Eigen::MatrixXd& precision,
                                      double weight_floor) {
  const MoveKind kind = direction_of(from, to);
  const int e = toggled_edge(from, to);
  const auto forward = legal_moves(from, kind);
  const auto backward = legal_moves(to, reverse(kind));
  const auto wf = move_weights(forward, kind, precision, weight_floor);
  const auto wb = move_weights(backward, reverse(kind), precision, weight_floor);
  return log_mass_ratio(sum(wf), sum(wb), wf[position_of(forward, e)], wb[position_of(backward, e)]);
}

ChainState add_delete_step(const ChainState& state, PosteriorScorer& scorer, Rng& rng) {
  const MoveKind kind = std::bernoulli_distribution(0.5)(rng) ? MoveKind::remove : MoveKind::add;
  const auto moves = legal_moves(state.graph, kind);
  if (moves.empty()) {
    ChainState next = state;
    ++next.step_index;
    return next;
  }
  const auto pick = std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng);
  const Graph proposed = state.graph.toggled(moves[pick]);
  const auto reverse_moves = legal_moves(proposed, reverse(kind));
  const double proposed_score = scorer(proposed);
  const double log_alpha = (proposed_score - state.log_score) + log_count_ratio(moves.size(), reverse_moves.size());
  return finish(state, proposed, proposed_score, log_alpha, rng);
}

ChainState data_driven_step(const ChainState& state, PosteriorScorer& scorer, const KernelConfig& cfg, Rng& rng) {
  const Eigen::MatrixXd& k = scorer.stats().precision();
  const MoveKind kind = std::bernoulli_distribution(0.5)(rng) ? MoveKind::remove : MoveKind::add;
  const auto moves = legal_moves(state.graph, kind);
  if (moves.empty()) {
    ChainState next = state;
    ++next.step_index;
    return next;
  }
  const auto weights = move_weights(moves, kind, k, cfg.weight_floor);
  const double total = sum(weights);
  const std::size_t pick = draw_weighted(weights, total, rng);
  const int e = moves[pick];
  const Graph proposed = state.graph.toggled(e);

  const auto reverse_moves = legal_moves(proposed, reverse(kind));
  const auto reverse_weights = move_weights(reverse_moves, reverse(kind), k, cfg.weight_floor);
  const double log_q = log_mass_ratio(total, sum(reverse_weights), weights[pick],
                                      reverse_weights[position_of(reverse_moves, e)]);

  const double proposed_score = scorer(proposed);
  const double log_alpha = (proposed_score - state.log_score) + log_q;
  return finish(state, proposed, proposed_score, log_alpha, rng);
}

ChainState kernel_step(const ChainState& state, PosteriorScorer& scorer, const KernelConfig& cfg, Rng& rng) {
  switch (cfg.mode) {
    case KernelMode::add_delete:
      return add_delete_step(state, scorer, rng);
    case KernelMode::data_driven:
      return data_driven_step(state, scorer, cfg, rng);
    case KernelMode::alternate:
      return state.step_index % 2 == 0 ? add_delete_step(state, scorer, rng)
                                       : data_driven_step(state, scorer, cfg, rng);
  }
  return state;
}

ChainRun run_chain(const Graph& init, long steps, PosteriorScorer& scorer, const KernelConfig& cfg, Rng& rng,
                   bool record) {
  return run_chain(make_chain_state(init, scorer), steps, scorer, cfg, rng, record);
}

ChainRun run_chain(const ChainState& state, long steps, PosteriorScorer& scorer, const KernelConfig& cfg, Rng& rng,
                   bool record) {
  ChainRun run;
  run.final_state = state;
  if (record) {
    run.visits.reserve(static_cast<std::size_t>(std::max(0L, steps)));
    run.running_rate.reserve(static_cast<std::size_t>(std::max(0L, steps)));
  }
  long accepted = 0;
  for (long t = 0; t < steps; ++t) {
    ChainState next = kernel_step(run.final_state, scorer, cfg, rng);
    const bool was_accepted = next.accept_count > run.final_state.accept_count;
    accepted += was_accepted;
#ifndef NDEBUG
    if (!is_decomposable(next.graph)) throw NotDecomposable("chain left the decomposable space");
#endif
    run.final_state = std::move(next);
    if (record) {
      run.visits.push_back({run.final_state.step_index, run.final_state.graph, run.final_state.log_score,
                            was_accepted});
      run.running_rate.push_back(static_cast<double>(accepted) / static_cast<double>(t + 1));
    }
  }
  return run;
}

GraphSigmaDraw sample_graph_and_sigma(const ChainState& state, PosteriorScorer& scorer, const KernelConfig& cfg,
                                      long steps, Rng& rng) {
  if (steps < 1) throw DomainError("sub-chain length must be >= 1");
  GraphSigmaDraw out;
  out.state = run_chain(state, steps, scorer, cfg, rng, false).final_state;
  const double posterior_delta = scorer.hyperparams().delta + scorer.stats().n;
  out.sigma = sample_hiw(out.state.graph, posterior_delta, scorer.posterior_phi(), rng);
  return out;
}

}  // namespace ggm

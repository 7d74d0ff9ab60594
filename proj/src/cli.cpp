#include "ggm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <unordered_map>

#include "ggm/exact.hpp"

namespace ggm {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string flag_error(const std::string& flag, const std::string& what) { return "--" + flag + ": " + what; }

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw DomainError("manifest key '" + key + "': cannot parse '" + text + "'");
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw DomainError("manifest key '" + key + "': expected true/false, got '" + text + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct RankedGraph {
  Graph graph;
  double probability;
};

// Top-k CSV + DOT files + per-edge inclusion probabilities.
void write_graph_report(const std::filesystem::path& dir, std::span<const RankedGraph> ranked,
                        const Eigen::MatrixXd& marginals, std::span<const std::string> labels, int top_k,
                        std::ostream& out) {
  const std::size_t k = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(std::max(0, top_k)));
  {
    std::ofstream csv(dir / "top_graphs.csv", std::ios::binary);
    if (!csv) throw Error("cannot write '" + (dir / "top_graphs.csv").string() + "'");
    csv << "rank,graph_id_hex,k_edges,probability\n";
    for (std::size_t i = 0; i < k; ++i)
      csv << i + 1 << ',' << ranked[i].graph.id_hex() << ',' << ranked[i].graph.edge_count() << ','
          << format_double(ranked[i].probability) << '\n';
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::ofstream dot(dir / ("top_" + std::to_string(i + 1) + ".dot"), std::ios::binary);
    dot << to_dot(ranked[i].graph, "top" + std::to_string(i + 1), labels);
  }
  write_matrix_csv(dir / "edge_marginals.csv", marginals, labels);

  out << "rank  graph_id  edges  probability\n";
  for (std::size_t i = 0; i < k; ++i)
    out << std::setw(4) << i + 1 << "  " << std::setw(8) << ranked[i].graph.id_hex() << "  " << std::setw(5)
        << ranked[i].graph.edge_count() << "  " << std::setprecision(6) << std::fixed << ranked[i].probability
        << std::defaultfloat << '\n';
}

std::vector<RankedGraph> rank_visits(std::span<const Graph> visits) {
  std::unordered_map<Graph, long, GraphHash> counts;
  for (const auto& g : visits) ++counts[g];
  std::vector<RankedGraph> ranked;
  for (const auto& [g, c] : counts) ranked.push_back({g, static_cast<double>(c) / static_cast<double>(visits.size())});
  std::sort(ranked.begin(), ranked.end(), [](const RankedGraph& a, const RankedGraph& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.graph < b.graph;
  });
  return ranked;
}

Eigen::MatrixXd marginals_of(std::span<const RankedGraph> ranked, int p) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  for (const auto& r : ranked)
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (r.graph.has_edge(i, j)) {
          out(i, j) += r.probability;
          out(j, i) += r.probability;
        }
  return out;
}

Dataset load_dataset(const RunConfig& cfg, bool require_precision) {
  if (cfg.dataset.empty()) throw DomainError(flag_error("data", "a dataset CSV is required for this command"));
  return ingest_csv(cfg.dataset, {cfg.center, cfg.standardize, require_precision});
}

void record_dataset(Manifest& m, const Dataset& ds) {
  m.set("dataset.n", std::to_string(ds.stats.n));
  m.set("dataset.p", std::to_string(ds.stats.p));
  m.set("dataset.checksum_fnv1a", std::to_string(ds.checksum));
  m.set("standardize.denominator", "n-1");
}

int cmd_count(const RunConfig& cfg, const std::filesystem::path& dir, Manifest& manifest, std::ostream& out) {
  std::ofstream csv(dir / "counts.csv", std::ios::binary);
  csv << "p,total,decomposable\n";
  std::uint64_t last = 0;
  for (int p = 1; p <= cfg.p; ++p) {
    last = count_decomposable(p);
    csv << p << ',' << (std::uint64_t{1} << num_pairs(p)) << ',' << last << '\n';
  }
  out << "p=" << cfg.p << " total=" << (std::uint64_t{1} << num_pairs(cfg.p)) << " decomposable=" << last << '\n';
  manifest.set("result.decomposable", std::to_string(last));
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& dir, Manifest& manifest, std::ostream& out) {
  Rng rng(cfg.seed);
  const Graph g = parse_graph_spec(cfg.graph, cfg.p);
  const auto sim = simulate_dataset(g, cfg.hp.tau, cfg.hp.delta, cfg.n, rng);
  std::vector<std::string> cols;
  for (int j = 0; j < cfg.p; ++j) cols.push_back("y" + std::to_string(j + 1));
  write_matrix_csv(dir / "data.csv", sim.data, cols);
  write_matrix_csv(dir / "sigma.csv", sim.sigma);
  std::ofstream(dir / "true_graph.dot", std::ios::binary) << to_dot(g, "truth");
  manifest.set("result.true_graph", g.id_hex());
  out << "simulated n=" << cfg.n << " p=" << cfg.p << " graph=" << g.id_hex() << " -> " << (dir / "data.csv").string()
      << '\n';
  return 0;
}

int cmd_exact(const RunConfig& cfg, const std::filesystem::path& dir, Manifest& manifest, std::ostream& out) {
  const Dataset ds = load_dataset(cfg, false);
  record_dataset(manifest, ds);
  const auto table = exact_posterior(ds.stats, cfg.hp);
  write_posterior_table(dir / "posterior.csv", table);
  std::vector<RankedGraph> ranked;
  for (const auto& e : table.entries) ranked.push_back({e.graph, e.probability});
  out << "exact posterior over " << table.entries.size() << " decomposable graphs\n";
  write_graph_report(dir, ranked, table.edge_marginals(), ds.columns, cfg.top_k, out);
  if (cfg.mle) {
    const auto surface = exact_marginal_mle(ds.stats, cfg.hp.delta);
    write_surface(dir / "surface.csv", surface);
    out << "grid MLE tau=" << format_double(surface.tau) << " r=" << format_double(surface.r) << '\n';
  }
  return 0;
}

int cmd_sample(const RunConfig& cfg, const std::filesystem::path& dir, Manifest& manifest, std::ostream& out) {
  const bool needs_k = cfg.kernel.mode != KernelMode::add_delete;
  const Dataset ds = load_dataset(cfg, needs_k);
  record_dataset(manifest, ds);
  Rng rng(cfg.seed);
  PosteriorScorer scorer(ds.stats, cfg.hp);
  const Graph init = cfg.init_graph == "backward" ? init_graph_backward(ds.stats, cfg.hp)
                                                  : parse_graph_spec(cfg.init_graph, ds.stats.p);
  ChainState state = make_chain_state(init, scorer);
  if (cfg.burn_in > 0) state = run_chain(state, cfg.burn_in, scorer, KernelConfig{}, rng, false).final_state;
  // Restart the counters so the acceptance trace covers the retained steps only.
  state.step_index = 0;
  state.accept_count = 0;
  const auto run = run_chain(state, cfg.steps, scorer, cfg.kernel, rng, true);
  write_visit_log(dir / "visits.csv", run.visits);
  write_acceptance_trace(dir / "acceptance.csv", run.running_rate);

  std::vector<Graph> graphs;
  graphs.reserve(run.visits.size());
  for (const auto& v : run.visits) graphs.push_back(v.graph);
  const auto ranked = rank_visits(graphs);
  const double rate = run.running_rate.empty() ? 0.0 : run.running_rate.back();
  out << "chain: " << cfg.steps << " steps after " << cfg.burn_in << " burn-in, acceptance rate "
      << format_double(rate) << ", " << ranked.size() << " distinct graphs\n";
  write_graph_report(dir, ranked, marginals_of(ranked, ds.stats.p), ds.columns, cfg.top_k, out);
  manifest.set("result.acceptance_rate", format_double(rate));

  if (ds.stats.p <= kMaxExactVertices && !graphs.empty()) {
    const auto cmp = chain_vs_exact(graphs, exact_posterior(ds.stats, cfg.hp), cfg.threshold);
    std::ofstream csv(dir / "comparison.csv", std::ios::binary);
    csv << "graph_id_hex,exact,estimate,relative_error_percent\n";
    for (const auto& e : cmp.errors)
      csv << e.graph.id_hex() << ',' << format_double(e.exact) << ',' << format_double(e.estimate) << ','
          << format_double(e.percent) << '\n';
    out << "vs exact posterior: TV=" << format_double(cmp.total_variation) << ", median |rel. error| "
        << format_double(cmp.median_abs_error) << "% over " << cmp.errors.size() << " graphs with probability >= "
        << format_double(cfg.threshold) << '\n';
    manifest.set("result.total_variation", format_double(cmp.total_variation));
  }
  return 0;
}

int cmd_fit(const RunConfig& cfg, const std::filesystem::path& dir, Manifest& manifest, std::ostream& out) {
  const bool needs_k = cfg.saem.kernel.mode != KernelMode::add_delete;
  const Dataset ds = load_dataset(cfg, needs_k);
  record_dataset(manifest, ds);
  Rng rng(cfg.seed);
  const auto result = run_saem(ds.stats, cfg.saem, cfg.hp, rng);
  write_saem_trace(dir / "saem_trace.csv", result.trace);
  {
    std::ofstream summary(dir / "summary.txt", std::ios::binary);
    summary << "tau_hat=" << format_double(result.theta.tau) << "\nr_hat=" << format_double(result.theta.r)
            << "\nfinal_graph=" << result.final_graph.id_hex() << "\niterations=" << result.trace.size() << '\n';
  }
  manifest.set("result.tau_hat", format_double(result.theta.tau));
  manifest.set("result.r_hat", format_double(result.theta.r));
  out << "tau_hat=" << format_double(result.theta.tau) << " r_hat=" << format_double(result.theta.r) << '\n';
  return 0;
}

int cmd_report(const RunConfig& cfg, const std::filesystem::path& dir, Manifest&, std::ostream& out) {
  if (cfg.input.empty()) throw DomainError(flag_error("input", "report needs a run directory"));
  const std::filesystem::path in = cfg.input;
  int p = cfg.p;
  std::vector<std::string> labels;
  if (std::filesystem::exists(in / "manifest.txt")) {
    const auto m = Manifest::read(in / "manifest.txt");
    if (m.has("dataset.p")) p = std::stoi(m.get("dataset.p"));
  }
  if (std::filesystem::exists(in / "posterior.csv")) {
    const auto table = read_posterior_table(in / "posterior.csv", p);
    std::vector<RankedGraph> ranked;
    for (const auto& e : table.entries) ranked.push_back({e.graph, e.probability});
    out << "posterior table from " << (in / "posterior.csv").string() << '\n';
    write_graph_report(dir, ranked, marginals_of(ranked, p), labels, cfg.top_k, out);
    return 0;
  }
  if (std::filesystem::exists(in / "visits.csv")) {
    const auto graphs = read_visit_graphs(in / "visits.csv", p);
    const auto ranked = rank_visits(graphs);
    out << "visit frequencies from " << (in / "visits.csv").string() << '\n';
    write_graph_report(dir, ranked, marginals_of(ranked, p), labels, cfg.top_k, out);
    return 0;
  }
  throw Error("--input: '" + in.string() + "' holds neither posterior.csv nor visits.csv");
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::fit: return "fit";
    case Command::sample: return "sample";
    case Command::exact: return "exact";
    case Command::count: return "count";
    case Command::simulate: return "simulate";
    case Command::report: return "report";
  }
  return "?";
}

std::string_view to_string(PhiMode m) {
  return m == PhiMode::scaled_identity ? "scaled_identity" : "empirical_gprior";
}

std::string_view to_string(GraphPrior g) {
  switch (g) {
    case GraphPrior::bernoulli: return "bernoulli";
    case GraphPrior::beta_binomial: return "beta_binomial";
    case GraphPrior::uniform: return "uniform";
  }
  return "?";
}

std::string_view to_string(KernelMode k) {
  switch (k) {
    case KernelMode::add_delete: return "add_delete";
    case KernelMode::data_driven: return "data_driven";
    case KernelMode::alternate: return "alternate";
  }
  return "?";
}

Command parse_command(std::string_view s) {
  for (auto c : {Command::fit, Command::sample, Command::exact, Command::count, Command::simulate, Command::report})
    if (to_string(c) == s) return c;
  throw DomainError("unknown command '" + std::string(s) + "'");
}

PhiMode parse_phi_mode(std::string_view s) {
  for (auto m : {PhiMode::scaled_identity, PhiMode::empirical_gprior})
    if (to_string(m) == s) return m;
  throw DomainError(flag_error("phi", "unknown mode '" + std::string(s) + "'"));
}

GraphPrior parse_graph_prior(std::string_view s) {
  for (auto g : {GraphPrior::bernoulli, GraphPrior::beta_binomial, GraphPrior::uniform})
    if (to_string(g) == s) return g;
  throw DomainError(flag_error("graph-prior", "unknown prior '" + std::string(s) + "'"));
}

KernelMode parse_kernel_mode(std::string_view s) {
  for (auto k : {KernelMode::add_delete, KernelMode::data_driven, KernelMode::alternate})
    if (to_string(k) == s) return k;
  throw DomainError(flag_error("kernel", "unknown kernel '" + std::string(s) + "'"));
}

Graph parse_graph_spec(std::string_view spec, int p) {
  if (spec == "figure1") {
    if (p != 9) throw DomainError(flag_error("graph", "figure1 has 9 vertices but --p is " + std::to_string(p)));
    return figure1_graph();
  }
  if (spec == "empty") return Graph(p);
  if (spec == "complete") return Graph::complete(p);
  const Graph g = Graph::from_hex(p, spec);
  if (!is_decomposable(g)) throw NotDecomposable(flag_error("graph", "'" + std::string(spec) + "' is not decomposable"));
  return g;
}

void RunConfig::validate() const {
  if (!(hp.delta > 0)) throw DomainError(flag_error("delta", "must be > 0"));
  if (!(hp.tau > 0)) throw DomainError(flag_error("tau", "must be > 0"));
  if (!(hp.r > 0 && hp.r < 1)) throw DomainError(flag_error("r", "must lie in (0, 1)"));
  if (kernel.weight_floor < 0) throw DomainError(flag_error("weight-floor", "must be >= 0"));
  if (steps < 0) throw DomainError(flag_error("steps", "must be >= 0"));
  if (burn_in < 0) throw DomainError(flag_error("burn-in", "must be >= 0"));
  if (top_k < 0) throw DomainError(flag_error("top-k", "must be >= 0"));
  if (!(threshold >= 0 && threshold <= 1)) throw DomainError(flag_error("threshold", "must lie in [0, 1]"));
  if (command == Command::count && (p < 1 || p > 8)) throw DomainError(flag_error("p", "count supports 1 <= p <= 8"));
  if (command == Command::simulate) {
    if (p < 1 || p > kMaxVertices) throw DomainError(flag_error("p", "must be in [1, 32]"));
    if (n < 1) throw DomainError(flag_error("n", "must be >= 1"));
  }
  if (command == Command::fit) {
    try {
      saem.validate();
    } catch (const DomainError& e) {
      throw DomainError(std::string("SAEM settings (--K1/--K/--M-first/--M-rest/--n-warm/--init-*): ") + e.what());
    }
  }
}

std::filesystem::path RunConfig::resolved_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "ggm_out";
}

Manifest RunConfig::to_manifest() const {
  Manifest m;
  m.set("command", std::string(to_string(command)));
  m.set("dataset", dataset);
  m.set("center", bool_text(center));
  m.set("standardize", bool_text(standardize));
  m.set("delta", format_double(hp.delta));
  m.set("phi_mode", std::string(to_string(hp.phi_mode)));
  m.set("tau", format_double(hp.tau));
  m.set("graph_prior", std::string(to_string(hp.graph_prior)));
  m.set("r", format_double(hp.r));
  m.set("kernel", std::string(to_string(kernel.mode)));
  m.set("weight_floor", format_double(kernel.weight_floor));
  m.set("steps", std::to_string(steps));
  m.set("burn_in", std::to_string(burn_in));
  m.set("init_graph", init_graph);
  m.set("saem.k1", std::to_string(saem.k1));
  m.set("saem.k_total", std::to_string(saem.k_total));
  m.set("saem.m_first", std::to_string(saem.m_first));
  m.set("saem.m_rest", std::to_string(saem.m_rest));
  m.set("saem.n_warm", std::to_string(saem.n_warm));
  m.set("saem.init_tau", format_double(saem.init.tau));
  m.set("saem.init_r", format_double(saem.init.r));
  m.set("saem.kernel", std::string(to_string(saem.kernel.mode)));
  m.set("seed", std::to_string(seed));
  m.set("output_dir", resolved_output_dir().string());
  m.set("p", std::to_string(p));
  m.set("graph", graph);
  m.set("n", std::to_string(n));
  m.set("top_k", std::to_string(top_k));
  m.set("threshold", format_double(threshold));
  m.set("mle", bool_text(mle));
  m.set("input", input);
  m.set("version", std::string("ggm ") + kVersion);
  m.set("eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                     std::to_string(EIGEN_MINOR_VERSION));
  m.set("compiler", __VERSION__);
  return m;
}

RunConfig RunConfig::from_manifest(const Manifest& m) {
  RunConfig c;
  auto str = [&](const char* key, std::string& dst) {
    if (m.has(key)) dst = m.get(key);
  };
  auto num = [&]<typename T>(const char* key, T& dst) {
    if (m.has(key)) dst = parse_number<T>(key, m.get(key));
  };
  auto flag = [&](const char* key, bool& dst) {
    if (m.has(key)) dst = parse_bool(key, m.get(key));
  };
  if (m.has("command")) c.command = parse_command(m.get("command"));
  str("dataset", c.dataset);
  flag("center", c.center);
  flag("standardize", c.standardize);
  num("delta", c.hp.delta);
  if (m.has("phi_mode")) c.hp.phi_mode = parse_phi_mode(m.get("phi_mode"));
  num("tau", c.hp.tau);
  if (m.has("graph_prior")) c.hp.graph_prior = parse_graph_prior(m.get("graph_prior"));
  num("r", c.hp.r);
  if (m.has("kernel")) c.kernel.mode = parse_kernel_mode(m.get("kernel"));
  num("weight_floor", c.kernel.weight_floor);
  num("steps", c.steps);
  num("burn_in", c.burn_in);
  str("init_graph", c.init_graph);
  num("saem.k1", c.saem.k1);
  num("saem.k_total", c.saem.k_total);
  num("saem.m_first", c.saem.m_first);
  num("saem.m_rest", c.saem.m_rest);
  num("saem.n_warm", c.saem.n_warm);
  num("saem.init_tau", c.saem.init.tau);
  num("saem.init_r", c.saem.init.r);
  if (m.has("saem.kernel")) c.saem.kernel.mode = parse_kernel_mode(m.get("saem.kernel"));
  c.saem.kernel.weight_floor = c.kernel.weight_floor;
  num("seed", c.seed);
  str("output_dir", c.output_dir);
  num("p", c.p);
  str("graph", c.graph);
  num("n", c.n);
  num("top_k", c.top_k);
  num("threshold", c.threshold);
  flag("mle", c.mle);
  str("input", c.input);
  return c;
}

int run_command(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto dir = cfg.resolved_output_dir();
  std::filesystem::create_directories(dir);
  Manifest manifest = cfg.to_manifest();
  int status = 0;
  switch (cfg.command) {
    case Command::count: status = cmd_count(cfg, dir, manifest, out); break;
    case Command::simulate: status = cmd_simulate(cfg, dir, manifest, out); break;
    case Command::exact: status = cmd_exact(cfg, dir, manifest, out); break;
    case Command::sample: status = cmd_sample(cfg, dir, manifest, out); break;
    case Command::fit: status = cmd_fit(cfg, dir, manifest, out); break;
    case Command::report: status = cmd_report(cfg, dir, manifest, out); break;
  }
  manifest.write(dir / "manifest.txt");
  return status;
}

}  // namespace ggm

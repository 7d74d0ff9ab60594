#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include "ggm/hiw.hpp"
#include "ggm/io.hpp"
#include "ggm/saem.hpp"
#include "ggm/sampler.hpp"

namespace ggm {

enum class Command { fit, sample, exact, count, simulate, report };

/// Environment variable consulted when no output directory is given.
inline constexpr const char* kOutputDirEnv = "GGM_OUTPUT_DIR";

struct RunConfig {
  Command command = Command::count;
  std::string dataset;
  bool center = true;
  bool standardize = true;

  Hyperparams hp{};
  KernelConfig kernel{};
  long steps = 100000;
  long burn_in = 0;  // add/delete steps discarded before `steps`
  std::string init_graph = "empty";

  SaemConfig saem{};

  std::uint64_t seed = 1;
  std::string output_dir;  // empty: $GGM_OUTPUT_DIR, else ./ggm_out

  int p = 4;                       // count, simulate
  std::string graph = "figure1";   // simulate: figure1 | empty | complete | <hex id>
  int n = 100;                     // simulate
  int top_k = 10;
  double threshold = 0.001;
  bool mle = false;                // exact: also write the (τ, r) likelihood surface
  std::string input;               // report: directory holding posterior.csv or visits.csv

  void validate() const;
  std::filesystem::path resolved_output_dir() const;

  Manifest to_manifest() const;
  static RunConfig from_manifest(const Manifest& m);
};

std::string_view to_string(Command c);
std::string_view to_string(PhiMode m);
std::string_view to_string(GraphPrior g);
std::string_view to_string(KernelMode k);
Command parse_command(std::string_view s);
PhiMode parse_phi_mode(std::string_view s);
GraphPrior parse_graph_prior(std::string_view s);
KernelMode parse_kernel_mode(std::string_view s);

/// figure1 | empty | complete | hex edge-bitset ID.
Graph parse_graph_spec(std::string_view spec, int p);

/// Runs one command, writing artifacts under the output directory and a
/// human-readable summary to `out`. Returns the process exit status.
int run_command(const RunConfig& cfg, std::ostream& out);

}  // namespace ggm

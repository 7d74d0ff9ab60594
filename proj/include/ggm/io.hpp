#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ggm/exact.hpp"
#include "ggm/hiw.hpp"
#include "ggm/saem.hpp"
#include "ggm/sampler.hpp"

namespace ggm {

struct Dataset {
  Eigen::MatrixXd data;  // after centring / standardisation
  std::vector<std::string> columns;
  DatasetStats stats;
  std::uint64_t checksum = 0;  // FNV-1a of the raw file bytes
};

struct IngestOptions {
  bool center = true;
  bool standardize = true;  // divides by the n-1 sample standard deviation
  bool require_precision = false;
};

/// Reads a rectangular numeric CSV; a non-numeric first row is taken as a header.
Dataset ingest_csv(const std::filesystem::path& path, const IngestOptions& opts = {});
Dataset ingest_csv(std::istream& in, const IngestOptions& opts = {});

std::uint64_t fnv1a(std::string_view bytes);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      std::span<const std::string> columns = {});
void write_visit_log(const std::filesystem::path& path, std::span<const VisitRecord> visits);
void write_acceptance_trace(const std::filesystem::path& path, std::span<const double> running_rate);
void write_posterior_table(const std::filesystem::path& path, const PosteriorTable& table);
void write_surface(const std::filesystem::path& path, const MleSurface& surface);
void write_saem_trace(const std::filesystem::path& path, std::span<const SaemTraceRow> trace);

/// Reads (graph_id_hex, k_edges, log_score, probability) rows back into a table.
PosteriorTable read_posterior_table(const std::filesystem::path& path, int p);
/// Reads the graph column of a visit log.
std::vector<Graph> read_visit_graphs(const std::filesystem::path& path, int p);

/// Flat key=value file; keys are kept sorted so the text is canonical.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string text() const;
  void write(const std::filesystem::path& path) const;
  static Manifest read(const std::filesystem::path& path);

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ggm

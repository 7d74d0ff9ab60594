#include "ggm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ggm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string_view rest = line;
  for (;;) {
    const auto comma = rest.find(',');
    out.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_row(line));
  }
  return rows;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

Dataset ingest_csv(const std::filesystem::path& path, const IngestOptions& opts) {
  auto in = open_in(path);
  std::ostringstream bytes;
  bytes << in.rdbuf();
  std::istringstream text(bytes.str());
  try {
    Dataset ds = ingest_csv(text, opts);
    ds.checksum = fnv1a(bytes.str());
    return ds;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.row(), e.col());
  }
}

Dataset ingest_csv(std::istream& in, const IngestOptions& opts) {
  auto rows = read_rows(in);
  Dataset ds;
  if (!rows.empty()) {
    double dummy;
    bool numeric = true;
    for (const auto& f : rows.front()) numeric = numeric && parse_double(f, dummy);
    if (!numeric) {
      ds.columns = rows.front();
      rows.erase(rows.begin());
    }
  }
  if (rows.size() < 2) throw ParseError("need at least 2 data rows", static_cast<int>(rows.size()) + 1, 1);
  const int p = static_cast<int>(rows.front().size());
  const int header_rows = ds.columns.empty() ? 0 : 1;
  if (!ds.columns.empty() && static_cast<int>(ds.columns.size()) != p)
    throw ParseError("header has " + std::to_string(ds.columns.size()) + " fields but data has " +
                         std::to_string(p),
                     1, 1);

  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd data(n, p);
  for (int i = 0; i < n; ++i) {
    const int file_row = i + 1 + header_rows;
    if (static_cast<int>(rows[i].size()) != p)
      throw ParseError("expected " + std::to_string(p) + " fields, found " + std::to_string(rows[i].size()),
                       file_row, static_cast<int>(std::min<std::size_t>(rows[i].size(), p)) + 1);
    for (int j = 0; j < p; ++j)
      if (!parse_double(rows[i][j], data(i, j)))
        throw ParseError("not a number: '" + rows[i][j] + "'", file_row, j + 1);
  }
  if (ds.columns.empty())
    for (int j = 0; j < p; ++j) ds.columns.push_back("y" + std::to_string(j + 1));

  if (opts.center) data.rowwise() -= data.colwise().mean();
  if (opts.standardize) {
    const Eigen::RowVectorXd mean = data.colwise().mean();
    for (int j = 0; j < p; ++j) {
      const double var = (data.col(j).array() - mean(j)).square().sum() / (n - 1);
      if (!(var > 0)) throw ZeroVariance(j);
      data.col(j) /= std::sqrt(var);
    }
  }
  ds.data = data;
  ds.stats = DatasetStats::from_data(data);
  if (opts.require_precision) ds.stats.precision();
  return ds;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      std::span<const std::string> columns) {
  auto out = open_out(path);
  if (!columns.empty()) {
    for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << columns[j];
    out << '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

void write_visit_log(const std::filesystem::path& path, std::span<const VisitRecord> visits) {
  auto out = open_out(path);
  out << "step,graph_id_hex,k_edges,log_score,accepted\n";
  for (const auto& v : visits)
    out << v.step << ',' << v.graph.id_hex() << ',' << v.graph.edge_count() << ',' << format_double(v.log_score)
        << ',' << (v.accepted ? 1 : 0) << '\n';
}

void write_acceptance_trace(const std::filesystem::path& path, std::span<const double> running_rate) {
  auto out = open_out(path);
  out << "step,running_rate\n";
  for (std::size_t t = 0; t < running_rate.size(); ++t) out << t + 1 << ',' << format_double(running_rate[t]) << '\n';
}

void write_posterior_table(const std::filesystem::path& path, const PosteriorTable& table) {
  auto out = open_out(path);
  out << "graph_id_hex,k_edges,log_score,probability\n";
  for (const auto& e : table.entries)
    out << e.graph.id_hex() << ',' << e.k_edges << ',' << format_double(e.log_score) << ','
        << format_double(e.probability) << '\n';
}

void write_surface(const std::filesystem::path& path, const MleSurface& surface) {
  auto out = open_out(path);
  out << "tau,r,log_lik\n";
  for (std::size_t a = 0; a < surface.grid.tau.size(); ++a)
    for (std::size_t b = 0; b < surface.grid.r.size(); ++b)
      out << format_double(surface.grid.tau[a]) << ',' << format_double(surface.grid.r[b]) << ','
          << format_double(surface.log_lik(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) << '\n';
}

void write_saem_trace(const std::filesystem::path& path, std::span<const SaemTraceRow> trace) {
  auto out = open_out(path);
  out << "iter,tau,r,s1,s2,s3,accept_rate\n";
  for (const auto& t : trace)
    out << t.iter << ',' << format_double(t.tau) << ',' << format_double(t.r) << ',' << format_double(t.s1) << ','
        << format_double(t.s2) << ',' << format_double(t.s3) << ',' << format_double(t.accept_rate) << '\n';
}

PosteriorTable read_posterior_table(const std::filesystem::path& path, int p) {
  auto in = open_in(path);
  auto rows = read_rows(in);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "graph_id_hex")
    throw ParseError(path.string() + ": missing posterior table header", 1, 1);
  PosteriorTable table;
  table.p = p;
  std::vector<double> scores;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 4) throw ParseError(path.string() + ": expected 4 fields", static_cast<int>(i) + 1, 1);
    PosteriorEntry e;
    e.graph = Graph::from_hex(p, row[0]);
    e.k_edges = e.graph.edge_count();
    if (!parse_double(row[2], e.log_score))
      throw ParseError(path.string() + ": bad log_score", static_cast<int>(i) + 1, 3);
    if (!parse_double(row[3], e.probability))
      throw ParseError(path.string() + ": bad probability", static_cast<int>(i) + 1, 4);
    scores.push_back(e.log_score);
    table.entries.push_back(std::move(e));
  }
  table.normalizer = log_sum_exp(scores);
  return table;
}

std::vector<Graph> read_visit_graphs(const std::filesystem::path& path, int p) {
  auto in = open_in(path);
  auto rows = read_rows(in);
  if (rows.empty() || rows.front().size() < 2 || rows.front()[1] != "graph_id_hex")
    throw ParseError(path.string() + ": missing visit log header", 1, 1);
  std::vector<Graph> out;
  out.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() < 2) throw ParseError(path.string() + ": short row", static_cast<int>(i) + 1, 1);
    out.push_back(Graph::from_hex(p, rows[i][1]));
  }
  return out;
}

const std::string& Manifest::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("manifest has no key '" + key + "'");
  return it->second;
}

std::string Manifest::text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

void Manifest::write(const std::filesystem::path& path) const {
  auto out = open_out(path);
  out << text();
}

Manifest Manifest::read(const std::filesystem::path& path) {
  auto in = open_in(path);
  Manifest m;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path.string() + ": expected key=value", row, 1);
    m.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return m;
}

}  // namespace ggm

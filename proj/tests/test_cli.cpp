#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ggm/cli.hpp"

using namespace ggm;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "ggm_test_cli";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Shell {
  int status;
  std::string out;
  std::string err;
};

Shell ggmsel(const std::string& args, const std::string& env = "") {
  fs::create_directories(kRoot);
  const fs::path out = kRoot / "stdout.txt", err = kRoot / "stderr.txt";
  const std::string cmd = env + " " + GGMSEL_PATH + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  return {WEXITSTATUS(raw), slurp(out), slurp(err)};
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv" || e.path().extension() == ".dot")
      out[e.path().filename().string()] = slurp(e.path());
  return out;
}

RunConfig base(Command c, const fs::path& out) {
  RunConfig cfg;
  cfg.command = c;
  cfg.output_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("count prints the decomposable count") {
  fs::remove_all(kRoot / "count");
  const auto r = ggmsel("count --p 4 --out " + (kRoot / "count").string());
  CHECK(r.status == 0);
  CHECK(r.out == "p=4 total=64 decomposable=61\n");
  CHECK(slurp(kRoot / "count" / "counts.csv") == "p,total,decomposable\n1,1,1\n2,2,2\n3,8,8\n4,64,61\n");
  CHECK(fs::exists(kRoot / "count" / "manifest.txt"));
}

TEST_CASE("flag errors name the flag") {
  auto r = ggmsel("sample --r 1.5 --data x.csv --out " + (kRoot / "bad").string());
  CHECK(r.status == 2);
  CHECK(r.err.find("--r") != std::string::npos);
  r = ggmsel("count --p 12 --out " + (kRoot / "bad").string());
  CHECK(r.status == 2);
  CHECK(r.err.find("--p") != std::string::npos);
  r = ggmsel("exact --out " + (kRoot / "bad").string());
  CHECK(r.status == 2);
  CHECK(r.err.find("--data") != std::string::npos);
  r = ggmsel("simulate --p 5 --graph figure1 --out " + (kRoot / "bad").string());
  CHECK(r.status == 2);
  CHECK(r.err.find("--graph") != std::string::npos);
  r = ggmsel("sample --kernel sideways");
  CHECK(r.status == 2);
  CHECK(r.err.find("--kernel") != std::string::npos);
  r = ggmsel("frobnicate");
  CHECK(r.status != 0);
}

TEST_CASE("output directory from the environment") {
  fs::remove_all(kRoot / "envdir");
  const auto r = ggmsel("count --p 3", std::string(kOutputDirEnv) + "=" + (kRoot / "envdir").string());
  CHECK(r.status == 0);
  CHECK(fs::exists(kRoot / "envdir" / "counts.csv"));
}

TEST_CASE("simulate is reproducible and ingestible") {
  const std::string args = "simulate --p 9 --graph figure1 --tau 0.03 --delta 1 --n 100 --seed 7 --out ";
  fs::remove_all(kRoot / "simA");
  fs::remove_all(kRoot / "simB");
  CHECK(ggmsel(args + (kRoot / "simA").string()).status == 0);
  CHECK(ggmsel(args + (kRoot / "simB").string()).status == 0);
  CHECK(slurp(kRoot / "simA" / "data.csv") == slurp(kRoot / "simB" / "data.csv"));
  const auto ds = ingest_csv(kRoot / "simA" / "data.csv", {false, false});
  CHECK(ds.stats.n == 100);
  CHECK(ds.stats.p == 9);
  CHECK(ds.columns.front() == "y1");
  CHECK(slurp(kRoot / "simA" / "true_graph.dot").find("graph truth") != std::string::npos);
}

TEST_CASE("every command reruns bit-identically from its manifest") {
  fs::remove_all(kRoot / "det");
  const fs::path d = kRoot / "det";
  std::ostringstream sink;

  RunConfig sim = base(Command::simulate, d / "simulate");
  sim.p = 4;
  sim.graph = "complete";
  sim.hp.delta = 3;
  sim.n = 30;
  sim.seed = 11;
  REQUIRE(run_command(sim, sink) == 0);
  const std::string data = (d / "simulate" / "data.csv").string();

  RunConfig cnt = base(Command::count, d / "count");
  cnt.p = 5;
  RunConfig ex = base(Command::exact, d / "exact");
  ex.dataset = data;
  ex.mle = true;
  RunConfig smp = base(Command::sample, d / "sample");
  smp.dataset = data;
  smp.kernel.mode = KernelMode::alternate;
  smp.steps = 3000;
  smp.burn_in = 500;
  smp.init_graph = "backward";
  RunConfig fit = base(Command::fit, d / "fit");
  fit.dataset = data;
  fit.saem.k1 = 10;
  fit.saem.k_total = 30;
  fit.saem.m_first = 50;
  for (const RunConfig* cfg : {&cnt, &ex, &smp, &fit}) REQUIRE(run_command(*cfg, sink) == 0);
  RunConfig rep = base(Command::report, d / "report");
  rep.input = (d / "sample").string();
  REQUIRE(run_command(rep, sink) == 0);

  for (const char* name : {"simulate", "count", "exact", "sample", "fit", "report"}) {
    const fs::path first = d / name;
    const fs::path second = d / (std::string(name) + "_again");
    const auto r = ggmsel("--config " + (first / "manifest.txt").string() + " --out " + second.string());
    CHECK_MESSAGE(r.status == 0, name << ": " << r.err);
    const auto a = csv_files(first), b = csv_files(second);
    CHECK_MESSAGE(!a.empty(), name);
    CHECK_MESSAGE(a == b, name);
  }
  CHECK(fs::exists(d / "exact" / "surface.csv"));
  CHECK(fs::exists(d / "sample" / "comparison.csv"));
  CHECK(slurp(d / "fit" / "summary.txt").find("tau_hat=") == 0);
  const auto m = Manifest::read(d / "sample" / "manifest.txt");
  CHECK(m.get("dataset.p") == "4");
  CHECK(m.get("standardize.denominator") == "n-1");
  CHECK(m.has("dataset.checksum_fnv1a"));
  CHECK(m.has("eigen"));
}

TEST_CASE("report renders an exact posterior table") {
  const fs::path d = kRoot / "det";
  RunConfig rep = base(Command::report, kRoot / "report_exact");
  rep.input = (d / "exact").string();
  rep.top_k = 3;
  std::ostringstream out;
  REQUIRE(run_command(rep, out) == 0);
  const std::string top = slurp(kRoot / "report_exact" / "top_graphs.csv");
  const std::string exact_top = slurp(d / "exact" / "top_graphs.csv");
  // first three rows agree with the exact command's own report
  CHECK(exact_top.rfind(top.substr(0, top.size()), 0) == 0);
  CHECK(fs::exists(kRoot / "report_exact" / "top_3.dot"));
  rep.input = (kRoot / "nothing_here").string();
  CHECK_THROWS_AS(run_command(rep, out), Error);
}

TEST_CASE("config round trip and parsing") {
  RunConfig cfg;
  cfg.command = Command::sample;
  cfg.hp.delta = 2.5;
  cfg.hp.tau = 0.674;
  cfg.hp.r = 0.69;
  cfg.hp.graph_prior = GraphPrior::beta_binomial;
  cfg.hp.phi_mode = PhiMode::empirical_gprior;
  cfg.kernel.mode = KernelMode::data_driven;
  cfg.kernel.weight_floor = 1e-9;
  cfg.seed = 123456789012345ull;
  cfg.output_dir = "x";
  cfg.saem.k1 = 7;
  const auto back = RunConfig::from_manifest(cfg.to_manifest());
  CHECK(back.to_manifest().entries() == cfg.to_manifest().entries());
  CHECK(back.hp.tau == 0.674);
  CHECK(back.seed == cfg.seed);
  CHECK(back.kernel.weight_floor == 1e-9);

  CHECK(parse_graph_spec("figure1", 9) == figure1_graph());
  CHECK(parse_graph_spec("3f", 4) == Graph::complete(4));
  CHECK(parse_graph_spec("empty", 3) == Graph(3));
  CHECK_THROWS_AS(parse_graph_spec("figure1", 4), DomainError);
  // 4-cycle 1-2-3-4-1: edges (1,2) (2,3) (3,4) (1,4) -> bits 0, 3, 5, 2
  CHECK_THROWS_AS(parse_graph_spec("2d", 4), NotDecomposable);
  CHECK(parse_kernel_mode("alternate") == KernelMode::alternate);
  CHECK_THROWS_AS(parse_graph_prior("flat"), DomainError);
}

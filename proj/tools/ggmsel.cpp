// ggmsel: structure selection for decomposable Gaussian graphical models.
//
//   ggmsel count --p 6
//   ggmsel simulate --p 9 --graph figure1 --tau 0.03 --delta 1 --n 100 --seed 7 --out sim
//   ggmsel exact --data heads.csv --delta 3 --tau 5 --graph-prior bernoulli --r 0.3333
//   ggmsel sample --data bones.csv --tau 0.674 --r 0.69 --kernel alternate --burn-in 10000 --steps 100000
//   ggmsel fit --data heads.csv --K1 100 --K 300
//   ggmsel report --input run_dir
//   ggmsel --config run_dir/manifest.txt --out rerun_dir

#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "ggm/cli.hpp"

namespace {

std::unique_ptr<CLI::App> build_app(ggm::RunConfig& cfg, std::string& config_path) {
  auto app = std::make_unique<CLI::App>("Bayesian structure selection for decomposable Gaussian graphical models",
                                        "ggmsel");
  app->add_option_function<std::string>(
         "command", [&cfg](const std::string& s) { cfg.command = ggm::parse_command(s); },
         "fit | sample | exact | count | simulate | report")
      ->check(CLI::IsMember({"fit", "sample", "exact", "count", "simulate", "report"}));
  app->add_option("--config", config_path, "manifest.txt of an earlier run; other flags override it");

  app->add_option("--data", cfg.dataset, "input CSV (rows = observations)");
  app->add_option("--center", cfg.center, "subtract column means (true/false)");
  app->add_option("--standardize", cfg.standardize, "divide by column standard deviations, n-1 denominator");

  app->add_option("--delta", cfg.hp.delta, "HIW degrees of freedom");
  app->add_option_function<std::string>(
      "--phi", [&cfg](const std::string& s) { cfg.hp.phi_mode = ggm::parse_phi_mode(s); },
      "scaled_identity | empirical_gprior");
  app->add_option("--tau", cfg.hp.tau, "Phi = tau * I scale");
  app->add_option_function<std::string>(
      "--graph-prior", [&cfg](const std::string& s) { cfg.hp.graph_prior = ggm::parse_graph_prior(s); },
      "bernoulli | beta_binomial | uniform");
  app->add_option("--r", cfg.hp.r, "Bernoulli edge-inclusion probability");

  app->add_option_function<std::string>(
      "--kernel", [&cfg](const std::string& s) { cfg.kernel.mode = ggm::parse_kernel_mode(s); },
      "add_delete | data_driven | alternate");
  app->add_option("--weight-floor", cfg.kernel.weight_floor, "clamp for data-driven proposal weights");
  app->add_option("--steps", cfg.steps, "retained MCMC steps");
  app->add_option("--burn-in", cfg.burn_in, "add/delete steps discarded first");
  app->add_option("--init-graph", cfg.init_graph, "empty | complete | backward | <hex id>");

  app->add_option("--K1", cfg.saem.k1, "SAEM iterations with unit step size");
  app->add_option("--K", cfg.saem.k_total, "SAEM iterations");
  app->add_option("--M-first", cfg.saem.m_first, "sub-chain length during warm-up");
  app->add_option("--M-rest", cfg.saem.m_rest, "sub-chain length afterwards");
  app->add_option("--n-warm", cfg.saem.n_warm, "warm-up iterations");
  app->add_option("--init-tau", cfg.saem.init.tau, "initial tau");
  app->add_option("--init-r", cfg.saem.init.r, "initial r");
  app->add_option_function<std::string>(
      "--saem-kernel", [&cfg](const std::string& s) { cfg.saem.kernel.mode = ggm::parse_kernel_mode(s); },
      "graph kernel used inside SAEM");

  app->add_option("--seed", cfg.seed, "random seed");
  app->add_option("--out", cfg.output_dir, std::string("output directory (default $") + ggm::kOutputDirEnv +
                                               " or ./ggm_out)");
  app->add_option("--p", cfg.p, "vertex count for count / simulate / report");
  app->add_option("--graph", cfg.graph, "figure1 | empty | complete | <hex id>");
  app->add_option("--n", cfg.n, "simulated sample size");
  app->add_option("--top-k", cfg.top_k, "graphs listed in reports");
  app->add_option("--threshold", cfg.threshold, "probability threshold for relative-error reports");
  app->add_flag("--mle", cfg.mle, "exact: also evaluate the (tau, r) likelihood grid");
  app->add_option("--input", cfg.input, "report: run directory to render");
  return app;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    ggm::RunConfig cfg;
    std::string config_path;
    {
      auto app = build_app(cfg, config_path);
      CLI11_PARSE(*app, argc, argv);
    }
    if (!config_path.empty()) {
      cfg = ggm::RunConfig::from_manifest(ggm::Manifest::read(config_path));
      std::string ignored;
      auto app = build_app(cfg, ignored);
      CLI11_PARSE(*app, argc, argv);
    }
    cfg.saem.kernel.weight_floor = cfg.kernel.weight_floor;
    return ggm::run_command(cfg, std::cout);
  } catch (const ggm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

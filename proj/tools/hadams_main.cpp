#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hadams/cli_runner.hpp"
#include "hadams/quadrature.hpp"
#include "hadams/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "hadams — numerical verifiers for the sharp Hardy-Adams inequality and "
      "the radial profile decomposition"};
  app.require_subcommand(1);

  const std::vector<std::string> subcommands = {
      "norms", "moser", "adams", "adachi", "reduce", "decompose", "selftest"};
  const std::vector<std::string> blurbs = {
      "norm reports for serialized functions",
      "Moser sequence norms, Orlicz norms and lower bounds",
      "exponential-functional sup probe and sharpness slope fit",
      "subcritical ratio probe, transform identities, reduced 1D inequality",
      "ball-to-2D reduction and auxiliary-function checks",
      "profile decomposition of a function family",
      "full acceptance suite (exit 0 iff every criterion passes)"};

  struct Options {
    std::string config;
    std::string out = "out";
    int threads = 1;
    uint64_t seed = 20240901;
  };
  std::vector<Options> opts(subcommands.size());

  for (size_t i = 0; i < subcommands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(subcommands[i], blurbs[i]);
    auto* cfg = sub->add_option("--config", opts[i].config,
                                "experiment config (JSON)");
    if (subcommands[i] != "selftest") cfg->required();
    sub->add_option("--out", opts[i].out, "output directory");
    sub->add_option("--threads", opts[i].threads, "worker threads");
    sub->add_option("--seed", opts[i].seed, "seed for generated corpora");
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < subcommands.size(); ++i) {
    if (!app.got_subcommand(subcommands[i])) continue;
    const Options& o = opts[i];
    try {
      nlohmann::json config = nlohmann::json::object();
      std::string config_text = "{}";
      if (!o.config.empty()) {
        config_text = hadams::read_text_file(o.config);
        config = nlohmann::json::parse(config_text);
      }
      hadams::RunContext ctx{o.out, o.seed, o.threads};
      return hadams::run_subcommand(subcommands[i], config, config_text, ctx);
    } catch (const hadams::ConfigError& e) {
      std::cerr << e.what() << "\n";
      return 2;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const hadams::QuadratureError& e) {
      std::cerr << "numerical diagnostic: " << e.what()
                << " (partial value " << hadams::fmt17(e.partial.value) << ")\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

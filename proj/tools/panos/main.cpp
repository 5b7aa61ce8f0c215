#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"
#include "panos/io/manifest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"PANOS weakly supervised velocity-regulation workbench"};
  app.set_version_flag("--version", std::string(panos::io::kToolVersion));
  app.require_subcommand(1);

  panos::cli::CommonArgs args;
  std::string seed_str;
  std::filesystem::path dataset;

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", args.config, "keyed plain-text config file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out, "output directory")->required();
    cmd->add_option("--seed", seed_str, "override the config seed");
    cmd->add_option("--checkpoint", args.checkpoint, "model checkpoint path");
  };

  auto* collect = app.add_subcommand("collect", "simulate rollouts and build datasets");
  add_common(collect);
  auto* train = app.add_subcommand("train", "train a model on a dataset");
  add_common(train);
  train->add_option("--dataset", dataset, "dataset file (PNSD)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* compare = app.add_subcommand("compare", "run the controller trial matrix");
  add_common(compare);
  auto* pca = app.add_subcommand("pca-report", "explained-variance report per group");
  add_common(pca);
  auto* eval = app.add_subcommand("eval", "run a single closed-loop trial");
  add_common(eval);

  CLI11_PARSE(app, argc, argv);

  if (!seed_str.empty()) {
    try {
      args.seed = std::stoull(seed_str);
    } catch (...) {
      std::cerr << "error: --seed must be an unsigned integer\n";
      return 1;
    }
  }

  try {
    if (collect->parsed()) return panos::cli::cmd_collect(args);
    if (train->parsed()) return panos::cli::cmd_train(args, dataset);
    if (compare->parsed()) return panos::cli::cmd_compare(args);
    if (pca->parsed()) return panos::cli::cmd_pca_report(args);
    if (eval->parsed()) return panos::cli::cmd_eval(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

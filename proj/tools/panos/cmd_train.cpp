#include <string>

#include "commands.hpp"
#include "panos/data/dataset_io.hpp"
#include "panos/io/manifest.hpp"
#include "panos/log.hpp"
#include "panos/net/checkpoint.hpp"
#include "panos/train/trainer.hpp"

namespace panos::cli {

int cmd_train(const CommonArgs& args, const std::filesystem::path& dataset_path) {
  auto cfg = io::Config::parse_file(args.config);
  cfg.validate_keys({"train.epochs", "train.batch_size", "train.learning_rate",
                     "train.selection_fraction", "train.seed",
                     "train.checkpoint_interval", "train.alpha_decay",
                     "train.tokenizer_seed", "train.param_seed"});

  train::TrainConfig tc;
  tc.epochs = static_cast<int>(cfg.get_int("train.epochs", 200));
  tc.batch_size = static_cast<std::size_t>(cfg.get_int("train.batch_size", 64));
  tc.learning_rate = cfg.get_double("train.learning_rate", 1e-3);
  tc.selection_fraction = cfg.get_double("train.selection_fraction", 0.5);
  tc.seed = args.seed.value_or(cfg.get_u64("train.seed", 7));
  tc.checkpoint_interval = static_cast<int>(cfg.get_int("train.checkpoint_interval", 50));
  tc.alpha_decay = cfg.get_double("train.alpha_decay", 1e-3);
  tc.validate();

  net::ModelConfig mc;
  mc.tokenizer_seed = cfg.get_u64("train.tokenizer_seed", mc.tokenizer_seed);
  mc.param_seed = cfg.get_u64("train.param_seed", mc.param_seed);

  const auto sequences = data::read_dataset(dataset_path);
  log::info("training on " + std::to_string(sequences.size()) + " sequences");

  const auto out = ensure_out_dir(args.out);
  const auto checkpoint_path = out / "checkpoint.pnsw";
  const auto result = train::fit(sequences, tc, mc, checkpoint_path);
  net::write_checkpoint(result.params, checkpoint_path);
  const auto curve_path = out / "curve.csv";
  train::write_curve_csv(result.curve, curve_path);

  io::Manifest manifest;
  manifest.command = "train";
  manifest.config_hash = cfg.canonical_hash();
  manifest.seeds = {tc.seed, mc.tokenizer_seed, mc.param_seed};
  manifest.inputs = {args.config.string(), dataset_path.string()};
  manifest.outputs = {checkpoint_path.string(), curve_path.string()};
  io::write_manifest(manifest, out / "manifest.json");
  return 0;
}

}  // namespace panos::cli

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "commands.hpp"
#include "panos/data/dataset_io.hpp"
#include "panos/data/sequence.hpp"
#include "panos/hash.hpp"
#include "panos/io/manifest.hpp"
#include "panos/log.hpp"
#include "panos/sim/runlog_io.hpp"

namespace panos::cli {

namespace fs = std::filesystem;

std::filesystem::path ensure_out_dir(const std::filesystem::path& out) {
  fs::create_directories(out);
  if (!fs::is_directory(out))
    throw std::runtime_error("cannot create output directory: " + out.string());
  return out;
}

std::string format_payload(double payload) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%gkg", payload);
  return buf;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  return fnv1a64_u64(c, fnv1a64_u64(b, fnv1a64_u64(a, fnv1a64_u64(base))));
}

int cmd_collect(const CommonArgs& args) {
  auto cfg = io::Config::parse_file(args.config);
  cfg.validate_keys({"collect.terrains", "collect.payloads", "collect.rollouts_per_cell",
                     "collect.duration_s", "collect.segment_s", "collect.v_min",
                     "collect.v_max", "collect.window_s", "collect.seed",
                     "collect.write_runlogs"});

  const auto terrains = cfg.get_list("collect.terrains",
                                     {"concrete", "grass", "gravel", "pebble"});
  const auto payloads = cfg.get_double_list("collect.payloads", {1.0, 6.8});
  const auto rollouts_per_cell = cfg.get_int("collect.rollouts_per_cell", 1);
  const double duration = cfg.get_double("collect.duration_s", 80.0);
  const double segment = cfg.get_double("collect.segment_s", 5.0);
  const double v_min = cfg.get_double("collect.v_min", 0.3);
  const double v_max = cfg.get_double("collect.v_max", 2.5);
  const double window = cfg.get_double("collect.window_s", 1.0);
  const std::uint64_t seed = args.seed.value_or(cfg.get_u64("collect.seed", 42));
  const bool write_runlogs = cfg.get_string("collect.write_runlogs", "false") == "true";

  if (!(duration > 0.0))
    throw std::invalid_argument("config key collect.duration_s must be > 0");
  if (!(segment > 0.0))
    throw std::invalid_argument("config key collect.segment_s must be > 0");
  if (rollouts_per_cell < 1)
    throw std::invalid_argument("config key collect.rollouts_per_cell must be >= 1");
  if (!(v_min >= 0.0 && v_max >= v_min))
    throw std::invalid_argument("config key collect.v_min/collect.v_max: need 0 <= v_min <= v_max");

  const auto out = ensure_out_dir(args.out);
  io::Manifest manifest;
  manifest.command = "collect";
  manifest.config_hash = cfg.canonical_hash();
  manifest.inputs.push_back(args.config.string());

  std::vector<data::Sequence> all;
  std::uint32_t runlog_id = 0;
  for (std::size_t ti = 0; ti < terrains.size(); ++ti) {
    const auto cls = sim::terrain_class_from_name(terrains[ti]);
    for (std::size_t pi = 0; pi < payloads.size(); ++pi) {
      std::vector<data::Sequence> cell;
      for (int r = 0; r < rollouts_per_cell; ++r) {
        const std::uint64_t roll_seed =
            derive_seed(seed, ti, pi, static_cast<std::uint64_t>(r));
        manifest.seeds.push_back(roll_seed);
        const auto terrain = sim::make_terrain(cls, roll_seed);
        const auto profile = sim::random_velocity_profile(v_min, v_max, segment, roll_seed);
        const auto log = sim::rollout(terrain, profile, payloads[pi], duration, roll_seed);
        if (write_runlogs) {
          const auto rl_path = out / ("runlog_" + terrains[ti] + "_" +
                                      format_payload(payloads[pi]) + "_" +
                                      std::to_string(r) + ".jsonl");
          sim::write_runlog(log, rl_path);
          manifest.outputs.push_back(rl_path.string());
          manifest.outputs.push_back(rl_path.string() + ".frames");
        }
        auto seqs = data::form_sequences(log, window, runlog_id++);
        cell.insert(cell.end(), seqs.begin(), seqs.end());
      }
      const auto cell_path =
          out / ("dataset_" + terrains[ti] + "_" + format_payload(payloads[pi]) + ".pnsd");
      data::write_dataset(cell, cell_path);
      manifest.outputs.push_back(cell_path.string());
      all.insert(all.end(), cell.begin(), cell.end());
      log::info("collected " + std::to_string(cell.size()) + " sequences on " +
                terrains[ti] + " @ " + format_payload(payloads[pi]));
    }
  }

  const auto dataset_path = out / "dataset.pnsd";
  data::write_dataset(all, dataset_path);
  manifest.outputs.push_back(dataset_path.string());
  io::write_manifest(manifest, out / "manifest.json");
  log::info("wrote " + std::to_string(all.size()) + " sequences to " +
            dataset_path.string());
  return 0;
}

}  // namespace panos::cli

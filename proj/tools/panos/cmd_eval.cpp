#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "commands.hpp"
#include "panos/control/trial.hpp"
#include "panos/io/manifest.hpp"
#include "panos/metrics/stability.hpp"
#include "panos/net/checkpoint.hpp"
#include "panos/sim/runlog_io.hpp"

namespace panos::cli {

int cmd_eval(const CommonArgs& args) {
  auto cfg = io::Config::parse_file(args.config);
  cfg.validate_keys({"eval.controller", "eval.terrain", "eval.payload",
                     "eval.duration_s", "eval.seed", "eval.fixed_velocity",
                     "eval.reactive_gain", "eval.control_rate_hz", "eval.checkpoint"});

  ctrl::TrialSpec spec;
  spec.controller = ctrl::controller_from_name(cfg.get_string("eval.controller", "fixed"));
  spec.payload_mass = cfg.get_double("eval.payload", 1.0);
  spec.duration = cfg.get_double("eval.duration_s", 30.0);
  if (!(spec.duration > 0.0))
    throw std::invalid_argument("config key eval.duration_s must be > 0");
  spec.seed = args.seed.value_or(cfg.get_u64("eval.seed", 0));
  spec.fixed_velocity = cfg.get_double("eval.fixed_velocity", 2.0);
  spec.reactive_gain = cfg.get_double("eval.reactive_gain", 1.0);
  spec.control_rate = cfg.get_double("eval.control_rate_hz", 5.0);
  spec.terrain = sim::make_terrain(
      sim::terrain_class_from_name(cfg.get_string("eval.terrain", "gravel")), spec.seed);

  net::ModelParams model;
  bool model_loaded = false;
  if (spec.controller == ctrl::ControllerKind::Panos) {
    std::filesystem::path checkpoint = args.checkpoint;
    if (checkpoint.empty()) checkpoint = cfg.get_string("eval.checkpoint", "");
    if (checkpoint.empty())
      throw std::invalid_argument("panos eval requires --checkpoint or eval.checkpoint");
    model = net::read_checkpoint(checkpoint);
    model_loaded = true;
  }

  const auto log = ctrl::run_trial(spec, model_loaded ? &model : nullptr);
  const auto rep = metrics::stability_report(log);

  const auto out = ensure_out_dir(args.out);
  const auto log_path = out / "trial.jsonl";
  sim::write_runlog(log, log_path);

  const auto csv_path = out / "stability.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open csv: " + csv_path.string());
  csv << "controller,terrain,payload_kg,seed,jerk_FR,jerk_FL,jerk_HR,jerk_HL,jerk_C,"
         "jerk_mean,vibration_cost_cm,mean_commanded,mean_achieved\n";
  char buf[384];
  std::snprintf(buf, sizeof(buf), "%s,%s,%g,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                ctrl::controller_name(spec.controller), rep.terrain.c_str(),
                rep.payload_mass, static_cast<unsigned long long>(rep.seed),
                rep.jerk.per_imu[0], rep.jerk.per_imu[1], rep.jerk.per_imu[2],
                rep.jerk.per_imu[3], rep.jerk.per_imu[4], rep.jerk.overall,
                rep.vibration_cost_cm, rep.mean_commanded, rep.mean_achieved);
  csv << buf;
  csv.close();

  io::Manifest manifest;
  manifest.command = "eval";
  manifest.config_hash = cfg.canonical_hash();
  manifest.seeds = {spec.seed};
  manifest.inputs = {args.config.string()};
  manifest.outputs = {log_path.string(), log_path.string() + ".frames", csv_path.string()};
  io::write_manifest(manifest, out / "manifest.json");
  return 0;
}

}  // namespace panos::cli

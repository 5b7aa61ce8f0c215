#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "commands.hpp"
#include "panos/control/trial.hpp"
#include "panos/io/manifest.hpp"
#include "panos/io/svg.hpp"
#include "panos/log.hpp"
#include "panos/metrics/stability.hpp"
#include "panos/net/checkpoint.hpp"

namespace panos::cli {

namespace {

std::vector<std::uint64_t> parse_seed_list(const io::Config& cfg, const std::string& key,
                                           const std::vector<std::uint64_t>& fallback) {
  if (!cfg.has(key)) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& s : cfg.get_list(key)) {
    try {
      out.push_back(std::stoull(s));
    } catch (...) {
      throw std::invalid_argument("config key " + key + ": not an unsigned integer: '" + s + "'");
    }
  }
  return out;
}

}  // namespace

int cmd_compare(const CommonArgs& args) {
  auto cfg = io::Config::parse_file(args.config);
  cfg.validate_keys({"compare.controllers", "compare.terrains", "compare.payloads",
                     "compare.seeds", "compare.duration_s", "compare.fixed_velocity",
                     "compare.reactive_gain", "compare.control_rate_hz",
                     "compare.checkpoint"});

  const auto controllers =
      cfg.get_list("compare.controllers", {"panos", "fixed", "reactive"});
  const auto terrains = cfg.get_list("compare.terrains", {"grass", "gravel", "pebble"});
  const auto payloads = cfg.get_double_list("compare.payloads", {1.0, 6.8});
  const auto seeds = parse_seed_list(cfg, "compare.seeds", {101, 202});
  const double duration = cfg.get_double("compare.duration_s", 30.0);
  const double fixed_velocity = cfg.get_double("compare.fixed_velocity", 2.0);
  const double reactive_gain = cfg.get_double("compare.reactive_gain", 1.0);
  const double control_rate = cfg.get_double("compare.control_rate_hz", 5.0);
  if (!(duration > 0.0))
    throw std::invalid_argument("config key compare.duration_s must be > 0");

  std::filesystem::path checkpoint = args.checkpoint;
  if (checkpoint.empty()) checkpoint = cfg.get_string("compare.checkpoint", "");

  net::ModelParams model;
  bool model_loaded = false;
  for (const auto& c : controllers) {
    if (ctrl::controller_from_name(c) == ctrl::ControllerKind::Panos) {
      if (checkpoint.empty())
        throw std::invalid_argument(
            "panos controller requested but no checkpoint given (--checkpoint or "
            "compare.checkpoint)");
      model = net::read_checkpoint(checkpoint);
      model_loaded = true;
    }
  }

  const auto out = ensure_out_dir(args.out);
  const auto report_path = out / "report.csv";
  std::ofstream report(report_path, std::ios::binary);
  if (!report) throw std::runtime_error("cannot open report: " + report_path.string());
  report << "controller,terrain,payload_kg,seed,jerk_FR,jerk_FL,jerk_HR,jerk_HL,jerk_C,"
            "jerk_mean,vibration_cost_cm,mean_commanded,mean_achieved,"
            "improvement_vs_fixed_pct\n";

  // cell -> per-controller mean jerk / cost, for improvements and charts.
  std::map<std::string, metrics::StabilityReport> by_cell;
  auto cell_key = [](const std::string& ctrl_name, const std::string& terrain,
                     double payload, std::uint64_t seed) {
    return ctrl_name + "|" + terrain + "|" + format_payload(payload) + "|" +
           std::to_string(seed);
  };

  struct Row {
    std::string controller, terrain;
    double payload;
    std::uint64_t seed;
    metrics::StabilityReport rep;
  };
  std::vector<Row> rows;

  for (const auto& ctrl_name : controllers) {
    const auto kind = ctrl::controller_from_name(ctrl_name);
    for (const auto& terrain_name : terrains) {
      for (double payload : payloads) {
        for (std::uint64_t seed : seeds) {
          ctrl::TrialSpec spec;
          spec.controller = kind;
          spec.fixed_velocity = fixed_velocity;
          spec.reactive_gain = reactive_gain;
          spec.terrain =
              sim::make_terrain(sim::terrain_class_from_name(terrain_name), seed);
          spec.payload_mass = payload;
          spec.duration = duration;
          spec.seed = seed;
          spec.control_rate = control_rate;
          const auto log =
              ctrl::run_trial(spec, model_loaded ? &model : nullptr);
          auto rep = metrics::stability_report(log);
          by_cell[cell_key(ctrl_name, terrain_name, payload, seed)] = rep;
          rows.push_back(Row{ctrl_name, terrain_name, payload, seed, rep});
          log::info(ctrl_name + " on " + terrain_name + " @ " +
                    format_payload(payload) + " seed " + std::to_string(seed) +
                    ": jerk " + std::to_string(rep.jerk.overall));
        }
      }
    }
  }

  char buf[512];
  for (const auto& r : rows) {
    std::string improvement;
    const auto base_it =
        by_cell.find(cell_key("fixed", r.terrain, r.payload, r.seed));
    if (base_it != by_cell.end() && base_it->second.jerk.overall > 0.0) {
      std::snprintf(buf, sizeof(buf), "%.4f",
                    metrics::improvement_percent(base_it->second.jerk.overall,
                                                 r.rep.jerk.overall));
      improvement = buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "%s,%s,%g,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s\n",
                  r.controller.c_str(), r.terrain.c_str(), r.payload,
                  static_cast<unsigned long long>(r.seed), r.rep.jerk.per_imu[0],
                  r.rep.jerk.per_imu[1], r.rep.jerk.per_imu[2], r.rep.jerk.per_imu[3],
                  r.rep.jerk.per_imu[4], r.rep.jerk.overall, r.rep.vibration_cost_cm,
                  r.rep.mean_commanded, r.rep.mean_achieved, improvement.c_str());
    report << buf;
  }
  report.close();

  // Grouped bar charts: groups = terrain @ payload, series = controllers,
  // values averaged over seeds.
  std::vector<std::string> group_labels;
  for (const auto& terrain_name : terrains)
    for (double payload : payloads)
      group_labels.push_back(terrain_name + " " + format_payload(payload));

  auto averaged = [&](auto&& metric) {
    std::vector<std::vector<double>> values(controllers.size());
    for (std::size_t ci = 0; ci < controllers.size(); ++ci) {
      for (const auto& terrain_name : terrains) {
        for (double payload : payloads) {
          double sum = 0.0;
          for (std::uint64_t seed : seeds)
            sum += metric(by_cell.at(cell_key(controllers[ci], terrain_name, payload, seed)));
          values[ci].push_back(sum / static_cast<double>(seeds.size()));
        }
      }
    }
    return values;
  };

  const auto jerk_svg = out / "compare_jerk.svg";
  const auto cost_svg = out / "compare_cost.svg";
  io::write_grouped_bar_chart(
      jerk_svg, "Mean jerk by terrain and payload", "mean jerk (m/s^3)", group_labels,
      controllers,
      averaged([](const metrics::StabilityReport& r) { return r.jerk.overall; }));
  io::write_grouped_bar_chart(
      cost_svg, "Vibration cost by terrain and payload", "vibration cost (cm)",
      group_labels, controllers,
      averaged([](const metrics::StabilityReport& r) { return r.vibration_cost_cm; }));

  io::Manifest manifest;
  manifest.command = "compare";
  manifest.config_hash = cfg.canonical_hash();
  manifest.seeds = seeds;
  manifest.inputs = {args.config.string()};
  if (!checkpoint.empty()) manifest.inputs.push_back(checkpoint.string());
  manifest.outputs = {report_path.string(), jerk_svg.string(), cost_svg.string()};
  io::write_manifest(manifest, out / "manifest.json");
  return 0;
}

}  // namespace panos::cli

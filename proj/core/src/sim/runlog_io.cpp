#include "panos/sim/runlog_io.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "panos/hash.hpp"

namespace panos::sim {

using nlohmann::json;

std::uint64_t sim_constants_hash() {
  std::uint64_t h = kFnvOffset;
  for (double c : {kBodyMass, kGravityAccel, kSlipGain, kRoughSlipGain, kRoughRef,
                   kVibAccelGain, kSlipNoiseSigma, kImuNoiseSigma, kDt, kFrameRateHz,
                   kLegLength, kHipSwingGain, kPayloadSwayGain, kPayloadSwayHz}) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(c));
    std::memcpy(&bits, &c, sizeof(bits));
    h = fnv1a64_u64(bits, h);
  }
  return h;
}

namespace {

json terrain_to_json(const TerrainSpec& t) {
  return json{{"class", terrain_class_name(t.terrain_class)},
              {"friction", t.friction_coeff},
              {"roughness", t.roughness},
              {"compliance", t.compliance},
              {"visual_seed", t.visual_seed}};
}

TerrainSpec terrain_from_json(const json& j) {
  TerrainSpec t;
  t.terrain_class = terrain_class_from_name(j.at("class").get<std::string>());
  t.friction_coeff = j.at("friction").get<double>();
  t.roughness = j.at("roughness").get<double>();
  t.compliance = j.at("compliance").get<double>();
  t.visual_seed = j.at("visual_seed").get<std::uint64_t>();
  return t;
}

}  // namespace

void write_runlog(const RunLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());

  json header{{"format", "panos-runlog"},
              {"version", 1},
              {"terrain", terrain_to_json(log.terrain)},
              {"payload_mass", log.payload_mass},
              {"dt", log.dt},
              {"seed", log.seed},
              {"constants_hash", sim_constants_hash()},
              {"steps", log.steps.size()},
              {"frames", log.frames.size()},
              {"frame_pixels", kImagePixels}};
  out << header.dump() << "\n";

  for (const auto& s : log.steps) {
    json imu = json::array();
    for (const auto& m : s.imu)
      imu.push_back(json{{"id", imu_name(m.imu_id)},
                         {"t", m.timestamp},
                         {"a", m.accel}});
    json rec{{"v_cmd", s.commanded_velocity},
             {"v_ach", s.achieved_velocity},
             {"proprio", s.proprio.flatten()},
             {"imu", imu},
             {"frame", s.observation_frame_index}};
    out << rec.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());

  std::ofstream fout(path.string() + ".frames", std::ios::binary);
  if (!fout) throw std::runtime_error("cannot open frames file for writing");
  for (const auto& f : log.frames)
    fout.write(reinterpret_cast<const char*>(f.data()),
               static_cast<std::streamsize>(f.size() * sizeof(float)));
  if (!fout) throw std::runtime_error("frames write failed");
}

RunLog read_runlog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open runlog: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("runlog missing header");
  json header = json::parse(line);
  if (header.at("format") != "panos-runlog" || header.at("version") != 1)
    throw std::runtime_error("runlog version mismatch");
  if (header.at("constants_hash").get<std::uint64_t>() != sim_constants_hash())
    throw std::runtime_error("runlog recorded with different simulator constants");

  RunLog log;
  log.terrain = terrain_from_json(header.at("terrain"));
  log.payload_mass = header.at("payload_mass").get<double>();
  log.dt = header.at("dt").get<double>();
  log.seed = header.at("seed").get<std::uint64_t>();

  const auto n_steps = header.at("steps").get<std::size_t>();
  log.steps.reserve(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("runlog truncated at step record " + std::to_string(i));
    json rec = json::parse(line);
    StepRecord s;
    s.commanded_velocity = rec.at("v_cmd").get<double>();
    s.achieved_velocity = rec.at("v_ach").get<double>();
    s.proprio = ProprioState::unflatten(rec.at("proprio").get<std::array<double, kProprioDim>>());
    const json& imu = rec.at("imu");
    if (imu.size() != kNumImus) throw std::runtime_error("runlog step has wrong imu count");
    for (std::size_t k = 0; k < kNumImus; ++k) {
      s.imu[k].imu_id = static_cast<ImuId>(k);
      s.imu[k].timestamp = imu[k].at("t").get<double>();
      s.imu[k].accel = imu[k].at("a").get<std::array<double, 3>>();
    }
    s.observation_frame_index = rec.at("frame").get<std::int64_t>();
    log.steps.push_back(std::move(s));
  }

  const auto n_frames = header.at("frames").get<std::size_t>();
  std::ifstream fin(path.string() + ".frames", std::ios::binary);
  if (!fin) throw std::runtime_error("cannot open frames file: " + path.string() + ".frames");
  log.frames.resize(n_frames);
  for (auto& f : log.frames) {
    f.resize(kImagePixels);
    fin.read(reinterpret_cast<char*>(f.data()),
             static_cast<std::streamsize>(f.size() * sizeof(float)));
    if (!fin) throw std::runtime_error("frames file truncated");
  }
  return log;
}

}  // namespace panos::sim

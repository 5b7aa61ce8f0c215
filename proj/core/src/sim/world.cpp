#include "panos/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "panos/hash.hpp"

namespace panos::sim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double clip(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

double frac(double x) { return x - std::floor(x); }

// Trot pairing: FR+HL in phase, FL+HR half a cycle apart.
constexpr std::array<double, kNumFeet> kFootPhaseOffset = {0.0, 0.5, 0.5, 0.0};

// splitmix64 finalizer, used as the lattice hash for value noise.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(ix) * 0x632be59bd9b4e019ull ^
                          mix64(static_cast<std::uint64_t>(iy) ^ seed));
  return (h >> 11) * 0x1.0p-53;  // [0,1)
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinear value noise in [-1,1], deterministic in (x, y, seed).
double value_noise(double x, double y, std::uint64_t seed) {
  const double fx = std::floor(x), fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const double tx = smoothstep(x - fx), ty = smoothstep(y - fy);
  const double v00 = lattice(ix, iy, seed), v10 = lattice(ix + 1, iy, seed);
  const double v01 = lattice(ix, iy + 1, seed), v11 = lattice(ix + 1, iy + 1, seed);
  const double a = v00 + (v10 - v00) * tx;
  const double b = v01 + (v11 - v01) * tx;
  return 2.0 * (a + (b - a) * ty) - 1.0;
}

double gait_frequency(double v_cmd) {
  if (v_cmd <= 0.0) return 0.0;
  return clip(2.0 * v_cmd, 1.0, 4.0);  // Hz
}

}  // namespace

const char* imu_name(ImuId id) {
  switch (id) {
    case ImuId::FR: return "FR";
    case ImuId::FL: return "FL";
    case ImuId::HR: return "HR";
    case ImuId::HL: return "HL";
    case ImuId::C: return "C";
  }
  throw std::invalid_argument("unknown imu id");
}

std::array<double, kProprioDim> ProprioState::flatten() const {
  std::array<double, kProprioDim> v{};
  int k = 0;
  for (double x : joint_velocity) v[k++] = x;
  for (double x : joint_effort) v[k++] = x;
  for (double x : hip_position) v[k++] = x;
  for (double x : hip_velocity) v[k++] = x;
  for (const auto& f : foot_position)
    for (double x : f) v[k++] = x;
  for (const auto& f : foot_velocity)
    for (double x : f) v[k++] = x;
  for (double x : foot_slip) v[k++] = x;
  return v;
}

ProprioState ProprioState::unflatten(const std::array<double, kProprioDim>& v) {
  ProprioState p;
  int k = 0;
  for (double& x : p.joint_velocity) x = v[k++];
  for (double& x : p.joint_effort) x = v[k++];
  for (double& x : p.hip_position) x = v[k++];
  for (double& x : p.hip_velocity) x = v[k++];
  for (auto& f : p.foot_position)
    for (double& x : f) x = v[k++];
  for (auto& f : p.foot_velocity)
    for (double& x : f) x = v[k++];
  for (double& x : p.foot_slip) x = v[k++];
  return p;
}

double ProprioState::mean_slip() const {
  double s = 0.0;
  for (double x : foot_slip) s += x;
  return s / kNumFeet;
}

ObservationFrame render_observation(const TerrainSpec& terrain, double position) {
  const int cls = static_cast<int>(terrain.terrain_class);
  static constexpr std::array<double, 4> kTexFreq = {6.0, 12.0, 25.0, 18.0};
  static constexpr std::array<double, 4> kTint = {0.20, 0.45, 0.70, 0.95};
  const std::uint64_t hseed = terrain.visual_seed ^ 0x517cc1b727220a95ull;
  const std::uint64_t tseed = terrain.visual_seed ^ 0xabcdef0123456789ull;
  const double fc = kTexFreq[cls];

  ObservationFrame img(kImagePixels);
  for (int py = 0; py < kImageSize; ++py) {
    const double u = position + py * 0.02;  // meters ahead along the path
    for (int px = 0; px < kImageSize; ++px) {
      const double v = (px - kImageSize / 2) * 0.02;
      // Channel 0: local heightmap, normalized around 0.5.
      const double h = terrain.roughness * value_noise(u / 0.05, v / 0.05, hseed);
      const double c0 = clip(0.5 + 0.5 * h / 0.04, 0.0, 1.0);
      // Channel 1: class texture, two octaves of value noise.
      const double n = value_noise(u * fc, v * fc, terrain.visual_seed) +
                       0.5 * value_noise(u * 2.0 * fc, v * 2.0 * fc, tseed);
      const double c1 = clip(0.5 + 0.35 * n, 0.0, 1.0);
      const int idx = (py * kImageSize + px) * 3;
      img[idx + 0] = static_cast<float>(c0);
      img[idx + 1] = static_cast<float>(c1);
      img[idx + 2] = static_cast<float>(kTint[cls]);
    }
  }
  return img;
}

Simulator::Simulator(const TerrainSpec& terrain, std::uint64_t seed)
    : terrain_(terrain), rng_(seed) {
  validate(terrain_);
  for (auto& imu : vib_phase_)
    for (auto& axis : imu)
      for (double& p : axis) p = rng_.uniform(0.0, kTwoPi);
  for (double& p : joint_phase_) p = rng_.uniform(0.0, kTwoPi);
  sway_phase_ = rng_.uniform(0.0, kTwoPi);
}

StepRecord Simulator::step(double v_cmd, double payload_mass, double dt) {
  if (v_cmd < 0.0) throw std::invalid_argument("v_cmd must be >= 0");
  if (!(dt > 0.0 && dt <= 0.1)) throw std::invalid_argument("dt must be in (0, 0.1]");
  if (payload_mass < 0.0) throw std::invalid_argument("payload_mass must be >= 0");

  const double mu = terrain_.friction_coeff;
  const double rough = terrain_.roughness;
  const double load = 1.0 + payload_mass / kBodyMass;
  const double f_gait = gait_frequency(v_cmd);
  const double t = time_ + dt;

  StepRecord rec;
  rec.commanded_velocity = v_cmd;
  ProprioState& p = rec.proprio;

  // Per-foot slip with gait-phase gating (no slip during swing).
  const double slip_base = kSlipGain * v_cmd * v_cmd * (1.0 - mu) * load *
                           (1.0 + kRoughSlipGain * rough / kRoughRef);
  std::array<double, kNumFeet> foot_frac{};
  std::array<bool, kNumFeet> stance{};
  for (int f = 0; f < kNumFeet; ++f) {
    foot_frac[f] = frac(gait_phase_ + kFootPhaseOffset[f]);
    stance[f] = foot_frac[f] < 0.5;
  }
  if (v_cmd > 0.0) {
    for (int f = 0; f < kNumFeet; ++f) {
      const double raw = (stance[f] ? slip_base : 0.0) + kSlipNoiseSigma * rng_.gaussian();
      p.foot_slip[f] = clip(raw, 0.0, 1.0);
    }
  }
  const double mean_slip = p.mean_slip();
  const double achieved = v_cmd * (1.0 - mean_slip);
  rec.achieved_velocity = achieved;

  // Joint kinematics. Joint order: 4 legs x (hip abduction, hip flexion, knee).
  static constexpr std::array<double, 3> kVelAmp = {0.3, 1.2, 1.8};
  static constexpr std::array<double, 3> kStaticPattern = {0.4, 1.0, 0.7};
  static constexpr std::array<double, 3> kPropPattern = {0.2, 1.0, 0.8};
  static constexpr std::array<double, 3> kLoadPattern = {0.5, 1.0, 0.8};
  const double static_torque = (kBodyMass + payload_mass) * kGravityAccel *
                               kLegLength / 8.0 * (1.0 + 0.5 * terrain_.compliance);
  // Stance-loading oscillation; common across joints so payload changes the
  // correlation structure of the effort block, not just its mean.
  const double loading = 2.5 * v_cmd * load * std::abs(std::sin(kTwoPi * 2.0 * gait_phase_));
  // Slow fore/aft payload shift: front legs unload as hind legs load. This
  // direction is independent of the velocity-driven common mode, so heavy
  // payloads broaden the effort covariance instead of only rescaling it.
  static constexpr std::array<double, kNumFeet> kSwayPattern = {1.0, 1.0, -1.0, -1.0};
  const double sway = v_cmd > 0.0 ? kPayloadSwayGain * payload_mass *
                                        std::sin(kTwoPi * kPayloadSwayHz * t + sway_phase_)
                                  : 0.0;
  for (int j = 0; j < kNumJoints; ++j) {
    const int leg = j / 3, typ = j % 3;
    const double ph = kTwoPi * foot_frac[leg] + joint_phase_[j];
    p.joint_velocity[j] =
        v_cmd > 0.0 ? v_cmd * kVelAmp[typ] * std::sin(ph) + 0.02 * v_cmd * rng_.gaussian()
                    : 0.0;
    p.joint_effort[j] = static_torque * kStaticPattern[typ] +
                        3.0 * v_cmd * load * kPropPattern[typ] +
                        loading * kLoadPattern[typ] +
                        sway * kSwayPattern[leg] * kLoadPattern[typ] +
                        0.3 * rng_.gaussian();
  }

  // Hips: gait swing plus roughness jitter around the standing pose (0 rad).
  const double hip_amp = kHipSwingGain * v_cmd;
  for (int h = 0; h < kNumFeet; ++h) {
    const double ph = kTwoPi * foot_frac[h];
    const double jitter =
        v_cmd > 0.0
            ? 0.004 * v_cmd * (rough / kRoughRef) * load * rng_.gaussian()
            : 0.0;
    p.hip_position[h] = hip_amp * std::sin(ph) + jitter;
    p.hip_velocity[h] = hip_amp * kTwoPi * f_gait * std::cos(ph) +
                        (v_cmd > 0.0 ? 0.02 * v_cmd * rng_.gaussian() : 0.0);
  }

  // Feet in body frame: nominal stance plus stride/lift cycloid.
  static constexpr std::array<double, kNumFeet> kFootX0 = {0.30, 0.30, -0.30, -0.30};
  static constexpr std::array<double, kNumFeet> kFootY0 = {-0.17, 0.17, -0.17, 0.17};
  const double sink = 0.01 * terrain_.compliance * load;
  const double half_stride = f_gait > 0.0 ? v_cmd / (4.0 * f_gait) : 0.0;
  for (int f = 0; f < kNumFeet; ++f) {
    const double ph = kTwoPi * foot_frac[f];
    p.foot_position[f][0] = kFootX0[f] + half_stride * std::cos(ph);
    p.foot_position[f][1] = kFootY0[f];
    p.foot_position[f][2] = -kLegLength - sink + 0.05 * std::max(0.0, -std::sin(ph));
    if (stance[f]) {
      p.foot_velocity[f][0] = -achieved - v_cmd * p.foot_slip[f];
      p.foot_velocity[f][2] = 0.0;
    } else {
      p.foot_velocity[f][0] = 2.0 * v_cmd;
      p.foot_velocity[f][2] = -0.05 * kTwoPi * f_gait * std::cos(ph);
    }
    p.foot_velocity[f][1] = v_cmd > 0.0 ? 0.02 * v_cmd * rng_.gaussian() : 0.0;
  }

  // Five-point IMU: gravity + band-limited vibration + leg-impact impulses
  // at gait frequency + a velocity-independent noise floor.
  static constexpr std::array<double, 3> kVibFreq = {8.0, 13.0, 21.0};  // Hz
  static constexpr std::array<double, 3> kAxisWeight = {0.4, 0.4, 0.8};
  const double vib_amp = kVibAccelGain * v_cmd * rough * load;
  const double imp_amp = 2.0 * v_cmd * load * (0.5 + 0.5 * rough / kRoughRef);
  for (int k = 0; k < kNumImus; ++k) {
    ImuSample& s = rec.imu[k];
    s.imu_id = static_cast<ImuId>(k);
    s.timestamp = t;
    double pulse = 0.0;
    if (k < kNumFeet) {
      pulse = std::pow(std::max(0.0, std::cos(kTwoPi * foot_frac[k])), 8.0);
    } else {
      for (int f = 0; f < kNumFeet; ++f)
        pulse += 0.25 * std::pow(std::max(0.0, std::cos(kTwoPi * foot_frac[f])), 8.0);
    }
    for (int ax = 0; ax < 3; ++ax) {
      double a = ax == 2 ? kGravityAccel : 0.0;
      for (int b = 0; b < 3; ++b)
        a += vib_amp * kAxisWeight[ax] / 3.0 *
             std::sin(kTwoPi * kVibFreq[b] * t + vib_phase_[k][ax][b]);
      if (ax == 2) a += imp_amp * pulse;
      if (ax == 0) a += 0.3 * imp_amp * pulse;
      a += kImuNoiseSigma * rng_.gaussian();
      s.accel[ax] = a;
    }
  }

  position_ += achieved * dt;
  gait_phase_ += f_gait * dt;
  time_ = t;

  if (!std::isfinite(position_) || !std::isfinite(achieved))
    throw std::runtime_error("simulator divergence: non-finite state");
  return rec;
}

RunLog rollout(const TerrainSpec& terrain,
               const std::function<double(double)>& velocity_profile,
               double payload_mass, double duration, std::uint64_t seed) {
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be > 0");
  RunLog log;
  log.terrain = terrain;
  log.payload_mass = payload_mass;
  log.dt = kDt;
  log.seed = seed;

  Simulator sim(terrain, seed);
  const auto n_steps = static_cast<std::size_t>(std::llround(duration / kDt));
  const auto frame_stride = static_cast<std::size_t>(std::llround(1.0 / (kFrameRateHz * kDt)));
  log.steps.reserve(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) {
    if (i % frame_stride == 0)
      log.frames.push_back(render_observation(terrain, sim.position()));
    const double v_cmd = velocity_profile(sim.time());
    StepRecord rec = sim.step(v_cmd, payload_mass, kDt);
    rec.observation_frame_index = static_cast<std::int64_t>(log.frames.size()) - 1;
    log.steps.push_back(std::move(rec));
  }
  return log;
}

std::function<double(double)> random_velocity_profile(double v_min, double v_max,
                                                      double segment_s,
                                                      std::uint64_t seed) {
  if (!(segment_s > 0.0)) throw std::invalid_argument("segment_s must be > 0");
  return [=](double t) {
    const auto k = static_cast<std::uint64_t>(std::floor(t / segment_s));
    Rng r(fnv1a64_u64(k, fnv1a64_u64(seed)));
    return r.uniform(v_min, v_max);
  };
}

}  // namespace panos::sim

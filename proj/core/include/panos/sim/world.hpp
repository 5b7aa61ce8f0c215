#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "panos/rng.hpp"
#include "panos/sim/terrain.hpp"

namespace panos::sim {

// Body and shaping constants.
constexpr double kBodyMass = 32.0;        // kg, Spot-class
constexpr double kGravityAccel = 9.81;    // m/s^2
constexpr double kSlipGain = 0.08;        // k_s
constexpr double kRoughSlipGain = 1.0;    // k_r
constexpr double kRoughRef = 0.02;        // m, gravel-scale roughness
constexpr double kVibAccelGain = 25.0;    // k_a, (m/s^2) per (m/s * m / kRoughRef)... scaled below
constexpr double kSlipNoiseSigma = 0.005;
constexpr double kImuNoiseSigma = 0.02;   // m/s^2 floor on each axis
constexpr double kDt = 0.01;              // 100 Hz proprio/IMU
constexpr double kFrameRateHz = 10.0;     // observation frames
constexpr double kLegLength = 0.35;       // m, nominal
constexpr double kHipSwingGain = 0.04;    // rad per (m/s)
constexpr double kPayloadSwayGain = 0.45; // N*m effort sway per kg of payload
constexpr double kPayloadSwayHz = 0.3;    // slow fore/aft payload shift
constexpr int kImageSize = 64;
constexpr int kImagePixels = kImageSize * kImageSize * 3;
constexpr int kProprioDim = 60;

enum class ImuId { FR = 0, FL = 1, HR = 2, HL = 3, C = 4 };
constexpr int kNumImus = 5;
constexpr int kNumFeet = 4;
constexpr int kNumJoints = 12;

const char* imu_name(ImuId id);

struct ImuSample {
  ImuId imu_id;
  std::array<double, 3> accel;  // m/s^2
  double timestamp;             // s
};

/// Flat proprioceptive state P_t. The flattened 60-vector layout is
/// [joint_velocity(12), joint_effort(12), hip_position(4), hip_velocity(4),
///  foot_position(12, foot-major xyz), foot_velocity(12), foot_slip(4)].
struct ProprioState {
  std::array<double, kNumJoints> joint_velocity{};  // rad/s
  std::array<double, kNumJoints> joint_effort{};    // N*m
  std::array<double, kNumFeet> hip_position{};      // rad
  std::array<double, kNumFeet> hip_velocity{};      // rad/s
  std::array<std::array<double, 3>, kNumFeet> foot_position{};  // m, body frame
  std::array<std::array<double, 3>, kNumFeet> foot_velocity{};  // m/s
  std::array<double, kNumFeet> foot_slip{};         // [0,1]

  std::array<double, kProprioDim> flatten() const;
  static ProprioState unflatten(const std::array<double, kProprioDim>& v);
  double mean_slip() const;
};

struct StepRecord {
  double commanded_velocity = 0.0;
  double achieved_velocity = 0.0;
  ProprioState proprio;
  std::array<ImuSample, kNumImus> imu;
  std::int64_t observation_frame_index = -1;  // most recent frame
};

using ObservationFrame = std::vector<float>;  // 64x64x3, row-major, [0,1]

struct RunLog {
  TerrainSpec terrain;
  double payload_mass = 0.0;  // kg
  double dt = kDt;            // s
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  std::vector<ObservationFrame> frames;
};

/// Synthetic terrain observation: channel 0 = local heightmap (constant 0.5
/// at zero roughness), channel 1 = seeded class texture, channel 2 = class
/// tint. Deterministic in (terrain, position).
ObservationFrame render_observation(const TerrainSpec& terrain, double position);

/// Kinematic-phenomenological traversal simulator. Not rigid-body dynamics:
/// it produces terrain/payload-correlated slips, efforts, and vibration.
class Simulator {
 public:
  Simulator(const TerrainSpec& terrain, std::uint64_t seed);

  /// Advance one step. v_cmd >= 0, dt in (0, 0.1], payload_mass >= 0.
  /// Throws std::runtime_error on non-finite internal state (divergence).
  StepRecord step(double v_cmd, double payload_mass, double dt);

  double position() const { return position_; }
  double time() const { return time_; }

 private:
  TerrainSpec terrain_;
  Rng rng_;
  double position_ = 0.0;
  double time_ = 0.0;
  double gait_phase_ = 0.0;  // cycles
  // Per-IMU, per-axis, per-band vibration phases, fixed at construction.
  std::array<std::array<std::array<double, 3>, 3>, kNumImus> vib_phase_{};
  std::array<double, kNumJoints> joint_phase_{};
  double sway_phase_ = 0.0;
};

/// Roll the simulator over a commanded-velocity profile. Deterministic in all
/// arguments; frames rendered at kFrameRateHz.
RunLog rollout(const TerrainSpec& terrain,
               const std::function<double(double)>& velocity_profile,
               double payload_mass, double duration, std::uint64_t seed);

/// Piecewise-constant random velocity profile: one uniform draw from
/// [v_min, v_max] per segment of segment_s seconds.
std::function<double(double)> random_velocity_profile(double v_min, double v_max,
                                                      double segment_s,
                                                      std::uint64_t seed);

}  // namespace panos::sim

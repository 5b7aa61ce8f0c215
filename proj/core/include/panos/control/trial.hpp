#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "panos/net/model.hpp"
#include "panos/sim/world.hpp"

namespace panos::ctrl {

constexpr double kVMin = 0.2;  // m/s
constexpr double kVMax = 2.0;  // m/s, matches the fixed test velocity
constexpr double kSlipTarget = 0.2;
constexpr double kDefaultControlRateHz = 5.0;

enum class ControllerKind { Panos, FixedVelocity, ReactiveSlip };

ControllerKind controller_from_name(const std::string& name);
const char* controller_name(ControllerKind k);

struct TrialSpec {
  ControllerKind controller = ControllerKind::FixedVelocity;
  double fixed_velocity = kVMax;   // FixedVelocity
  double reactive_gain = 1.0;      // ReactiveSlip
  sim::TerrainSpec terrain;
  double payload_mass = 1.0;       // kg
  double duration = 30.0;          // s
  std::uint64_t seed = 0;
  double control_rate = kDefaultControlRateHz;  // Hz, must divide 1/dt

  void validate() const;
};

/// One PANOS inference step: forward on (current observation, window-mean
/// proprio), command clamped to [kVMin, kVMax].
double panos_command(const net::ModelParams& model, const sim::ObservationFrame& image,
                     const std::array<double, sim::kProprioDim>& window_mean_proprio);

/// Closed-loop trial: controller at control_rate with zero-order hold,
/// simulator stepped at 100 Hz. Deterministic per (spec, model).
/// `model` is required for ControllerKind::Panos.
sim::RunLog run_trial(const TrialSpec& spec, const net::ModelParams* model = nullptr);

}  // namespace panos::ctrl

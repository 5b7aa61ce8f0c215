#include "panos/control/trial.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace panos::ctrl {

ControllerKind controller_from_name(const std::string& name) {
  if (name == "panos") return ControllerKind::Panos;
  if (name == "fixed") return ControllerKind::FixedVelocity;
  if (name == "reactive") return ControllerKind::ReactiveSlip;
  throw std::invalid_argument("unknown controller: " + name);
}

const char* controller_name(ControllerKind k) {
  switch (k) {
    case ControllerKind::Panos: return "panos";
    case ControllerKind::FixedVelocity: return "fixed";
    case ControllerKind::ReactiveSlip: return "reactive";
  }
  throw std::invalid_argument("unknown controller kind");
}

void TrialSpec::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("trial duration must be > 0");
  sim::validate(terrain);
  if (!(control_rate > 0.0)) throw std::invalid_argument("control_rate must be > 0");
  const double steps_per_tick = 1.0 / (control_rate * sim::kDt);
  if (std::abs(steps_per_tick - std::round(steps_per_tick)) > 1e-9)
    throw std::invalid_argument("control_rate must divide the simulator rate");
  if (!(payload_mass >= 0.0)) throw std::invalid_argument("payload_mass must be >= 0");
  if (controller == ControllerKind::FixedVelocity &&
      !(fixed_velocity >= 0.0 && fixed_velocity <= kVMax))
    throw std::invalid_argument("fixed_velocity must be in [0, v_max]");
}

double panos_command(const net::ModelParams& model, const sim::ObservationFrame& image,
                     const std::array<double, sim::kProprioDim>& window_mean_proprio) {
  // Inference uses MLP(c_t) directly; confidence plays no role here, so a
  // placeholder slip of 0 is passed through the forward contract.
  net::ForwardTrace tr = net::forward_from_tokens(
      net::tokenize_image(image, model), window_mean_proprio, 0.0, model);
  return std::clamp(tr.v_hat, kVMin, kVMax);
}

sim::RunLog run_trial(const TrialSpec& spec, const net::ModelParams* model) {
  spec.validate();
  if (spec.controller == ControllerKind::Panos && model == nullptr)
    throw std::invalid_argument("panos trial requires a loaded model");

  sim::RunLog log;
  log.terrain = spec.terrain;
  log.payload_mass = spec.payload_mass;
  log.dt = sim::kDt;
  log.seed = spec.seed;

  sim::Simulator simulator(spec.terrain, spec.seed);
  const auto n_steps = static_cast<std::size_t>(std::llround(spec.duration / sim::kDt));
  const auto tick_stride =
      static_cast<std::size_t>(std::llround(1.0 / (spec.control_rate * sim::kDt)));
  const auto frame_stride =
      static_cast<std::size_t>(std::llround(1.0 / (sim::kFrameRateHz * sim::kDt)));
  const auto window_steps = static_cast<std::size_t>(std::llround(1.0 / sim::kDt));

  std::deque<std::array<double, sim::kProprioDim>> proprio_window;
  std::deque<double> slip_window;
  double v_cmd = spec.controller == ControllerKind::FixedVelocity ? spec.fixed_velocity
                                                                  : kVMax;

  for (std::size_t i = 0; i < n_steps; ++i) {
    if (i % frame_stride == 0)
      log.frames.push_back(sim::render_observation(spec.terrain, simulator.position()));

    if (i % tick_stride == 0) {
      switch (spec.controller) {
        case ControllerKind::FixedVelocity:
          v_cmd = spec.fixed_velocity;
          break;
        case ControllerKind::ReactiveSlip: {
          double mean = 0.0;
          if (!slip_window.empty()) {
            for (double s : slip_window) mean += s;
            mean /= static_cast<double>(slip_window.size());
          }
          v_cmd = std::clamp(v_cmd - spec.reactive_gain * std::max(0.0, mean - kSlipTarget),
                             kVMin, kVMax);
          break;
        }
        case ControllerKind::Panos: {
          std::array<double, sim::kProprioDim> mean{};
          if (!proprio_window.empty()) {
            for (const auto& p : proprio_window)
              for (int k = 0; k < sim::kProprioDim; ++k) mean[k] += p[k];
            const double inv = 1.0 / static_cast<double>(proprio_window.size());
            for (double& x : mean) x *= inv;
          }
          v_cmd = panos_command(*model, log.frames.back(), mean);
          break;
        }
      }
    }

    sim::StepRecord rec = simulator.step(v_cmd, spec.payload_mass, sim::kDt);
    rec.observation_frame_index = static_cast<std::int64_t>(log.frames.size()) - 1;

    proprio_window.push_back(rec.proprio.flatten());
    slip_window.push_back(rec.proprio.mean_slip());
    if (proprio_window.size() > window_steps) proprio_window.pop_front();
    if (slip_window.size() > window_steps) slip_window.pop_front();

    log.steps.push_back(std::move(rec));
  }
  return log;
}

}  // namespace panos::ctrl

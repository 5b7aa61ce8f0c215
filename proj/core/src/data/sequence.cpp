#include "panos/data/sequence.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "panos/rng.hpp"

namespace panos::data {

std::vector<Sequence> form_sequences(const sim::RunLog& log, double window,
                                     std::uint32_t runlog_id) {
  if (window < log.dt) throw std::invalid_argument("window shorter than dt");
  const double frame_interval = 1.0 / sim::kFrameRateHz;
  const double ratio = window / frame_interval;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw std::invalid_argument("window must be a multiple of the frame interval");

  const auto steps_per_window = static_cast<std::size_t>(std::llround(window / log.dt));
  const std::size_t n_windows = log.steps.size() / steps_per_window;

  std::vector<Sequence> out;
  out.reserve(n_windows);
  for (std::size_t w = 0; w < n_windows; ++w) {
    const std::size_t begin = w * steps_per_window;
    Sequence seq;
    seq.runlog_id = runlog_id;
    seq.window_index = static_cast<std::uint32_t>(w);

    const auto frame_idx = log.steps[begin].observation_frame_index;
    if (frame_idx < 0 || static_cast<std::size_t>(frame_idx) >= log.frames.size())
      throw std::runtime_error("runlog window has no observation frame");
    seq.image = log.frames[static_cast<std::size_t>(frame_idx)];

    double v_sum = 0.0, slip_sum = 0.0;
    for (std::size_t i = begin; i < begin + steps_per_window; ++i) {
      const auto& s = log.steps[i];
      v_sum += s.commanded_velocity;
      slip_sum += s.proprio.mean_slip();
      const auto flat = s.proprio.flatten();
      for (int k = 0; k < sim::kProprioDim; ++k) seq.proprio[k] += flat[k];
    }
    const double inv = 1.0 / static_cast<double>(steps_per_window);
    for (double& x : seq.proprio) x *= inv;
    seq.v_applied = v_sum * inv;
    seq.mean_slip = slip_sum * inv;
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<MiniBatch> shuffle_batches(std::size_t n_sequences, std::size_t batch_size,
                                       std::uint64_t seed) {
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  std::vector<std::size_t> perm(n_sequences);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle_indices(perm);

  std::vector<MiniBatch> batches;
  for (std::size_t start = 0; start < perm.size(); start += batch_size) {
    MiniBatch b;
    b.batch_id = static_cast<std::uint32_t>(batches.size());
    const std::size_t end = std::min(start + batch_size, perm.size());
    b.indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                     perm.begin() + static_cast<std::ptrdiff_t>(end));
    batches.push_back(std::move(b));
  }
  return batches;
}

}  // namespace panos::data

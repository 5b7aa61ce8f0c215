#pragma once

#include <cstdint>
#include <vector>

#include "panos/sim/world.hpp"

namespace panos::data {

/// Synchronized sequence S_t = (image, window-averaged proprio, applied
/// velocity), plus the window-mean foot slip that drives confidence.
struct Sequence {
  sim::ObservationFrame image;                    // 64x64x3 in [0,1]
  std::array<double, sim::kProprioDim> proprio{}; // window mean
  double v_applied = 0.0;                         // m/s, window-mean command
  double mean_slip = 0.0;                         // [0,1]
  std::uint32_t runlog_id = 0;
  std::uint32_t window_index = 0;
};

struct MiniBatch {
  std::vector<std::size_t> indices;  // into the dataset's sequence list
  std::uint32_t batch_id = 0;
};

/// One Sequence per non-overlapping window; the trailing partial window is
/// dropped. window must be >= dt and a multiple of the frame interval.
std::vector<Sequence> form_sequences(const sim::RunLog& log, double window,
                                     std::uint32_t runlog_id = 0);

/// Seeded permutation split into batches of size B (last batch may be short).
std::vector<MiniBatch> shuffle_batches(std::size_t n_sequences, std::size_t batch_size,
                                       std::uint64_t seed);

}  // namespace panos::data

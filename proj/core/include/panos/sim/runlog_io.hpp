#pragma once

#include <cstdint>
#include <filesystem>

#include "panos/sim/world.hpp"

namespace panos::sim {

/// Hash over the simulator shaping constants; stored in every RunLog header
/// so logs from a different constant set are rejected on load.
std::uint64_t sim_constants_hash();

/// One JSON-lines file per rollout: a header record (terrain, payload, dt,
/// seed, constants hash, frame count) followed by one record per step.
/// Observation frames go to `path + ".frames"` as little-endian f32 blocks.
void write_runlog(const RunLog& log, const std::filesystem::path& path);
RunLog read_runlog(const std::filesystem::path& path);

}  // namespace panos::sim

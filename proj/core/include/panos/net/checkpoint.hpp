#pragma once

#include <filesystem>

#include "panos/net/model.hpp"

namespace panos::net {

/// Checkpoint file ("PNSW"): magic, version u16, dims, seeds, config hash,
/// then named parameter blocks of little-endian f32. Loading verifies the
/// dims and config hash.
void write_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams read_checkpoint(const std::filesystem::path& path);

}  // namespace panos::net

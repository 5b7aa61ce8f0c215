#pragma once

#include <filesystem>
#include <vector>

#include "panos/data/sequence.hpp"

namespace panos::data {

/// Dataset file ("PNSD"): magic, format version u16, sequence count u64,
/// then fixed-size records. All floats little-endian f32.
/// Record layout: image (64*64*3 f32), proprio (60 f32), v_applied f32,
/// mean_slip f32, runlog_id u32, window_index u32.
void write_dataset(const std::vector<Sequence>& sequences,
                   const std::filesystem::path& path);
std::vector<Sequence> read_dataset(const std::filesystem::path& path);

}  // namespace panos::data

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "panos/io/config.hpp"

namespace panos::cli {

struct CommonArgs {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;      // overrides the config seed
  std::filesystem::path checkpoint;       // overrides the config checkpoint
};

int cmd_collect(const CommonArgs& args);
int cmd_train(const CommonArgs& args, const std::filesystem::path& dataset);
int cmd_compare(const CommonArgs& args);
int cmd_pca_report(const CommonArgs& args);
int cmd_eval(const CommonArgs& args);

// Shared helpers.
std::filesystem::path ensure_out_dir(const std::filesystem::path& out);
std::string format_payload(double payload);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

}  // namespace panos::cli

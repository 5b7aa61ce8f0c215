#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "panos/data/dataset_io.hpp"
#include "panos/data/sequence.hpp"
#include "panos/rng.hpp"
#include "panos/sim/world.hpp"

using namespace panos;
namespace fs = std::filesystem;

namespace {

sim::RunLog make_log(double duration, double v_cmd, std::uint64_t seed) {
  const auto terrain = sim::make_terrain(sim::TerrainClass::Grass, seed);
  return sim::rollout(terrain, [=](double) { return v_cmd; }, 1.0, duration, seed);
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("panos_test_" + std::to_string(0) +
                                                "_" + std::to_string(counter++))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("form_sequences: one sequence per full window") {
  const auto log = make_log(60.0, 2.0, 1);
  const auto seqs = data::form_sequences(log, 1.0);
  REQUIRE(seqs.size() == 60);
  for (const auto& s : seqs) {
    CHECK(s.v_applied == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.image.size() == static_cast<std::size_t>(sim::kImagePixels));
    CHECK(s.mean_slip >= 0.0);
    CHECK(s.mean_slip <= 1.0);
  }
  // Trailing partial window dropped.
  const auto log2 = make_log(10.55, 2.0, 1);
  CHECK(data::form_sequences(log2, 1.0).size() == 10);
}

TEST_CASE("form_sequences: window mean slip matches brute-force re-averaging") {
  const auto log = make_log(8.0, 1.7, 2);
  const auto seqs = data::form_sequences(log, 1.0);
  const std::size_t steps_per_window = 100;
  for (std::size_t w = 0; w < seqs.size(); ++w) {
    double acc = 0.0;
    for (std::size_t i = w * steps_per_window; i < (w + 1) * steps_per_window; ++i)
      for (double slip : log.steps[i].proprio.foot_slip) acc += slip;
    acc /= static_cast<double>(steps_per_window * sim::kNumFeet);
    REQUIRE(seqs[w].mean_slip == doctest::Approx(acc).epsilon(1e-9));
  }
}

TEST_CASE("form_sequences rejects bad windows") {
  const auto log = make_log(2.0, 1.0, 3);
  CHECK_THROWS_AS(data::form_sequences(log, 0.001), std::invalid_argument);
  CHECK_THROWS_AS(data::form_sequences(log, 0.15), std::invalid_argument);
}

TEST_CASE("window averaging commutes with log concatenation") {
  const auto a = make_log(3.0, 1.2, 4);
  const auto b = make_log(2.0, 2.1, 5);
  sim::RunLog cat = a;
  const auto frame_offset = static_cast<std::int64_t>(a.frames.size());
  for (auto s : b.steps) {
    s.observation_frame_index += frame_offset;
    cat.steps.push_back(std::move(s));
  }
  cat.frames.insert(cat.frames.end(), b.frames.begin(), b.frames.end());

  const auto sep_a = data::form_sequences(a, 1.0);
  const auto sep_b = data::form_sequences(b, 1.0);
  const auto joined = data::form_sequences(cat, 1.0);
  REQUIRE(joined.size() == sep_a.size() + sep_b.size());
  for (std::size_t i = 0; i < sep_a.size(); ++i)
    CHECK(joined[i].proprio == sep_a[i].proprio);
  for (std::size_t i = 0; i < sep_b.size(); ++i)
    CHECK(joined[sep_a.size() + i].proprio == sep_b[i].proprio);
}

TEST_CASE("shuffle_batches: partition sizes and determinism") {
  const auto batches = data::shuffle_batches(10, 4, 9);
  REQUIRE(batches.size() == 3);
  CHECK(batches[0].indices.size() == 4);
  CHECK(batches[1].indices.size() == 4);
  CHECK(batches[2].indices.size() == 2);

  const auto again = data::shuffle_batches(10, 4, 9);
  for (std::size_t i = 0; i < batches.size(); ++i)
    CHECK(batches[i].indices == again[i].indices);

  CHECK(data::shuffle_batches(0, 4, 9).empty());
  CHECK_THROWS_AS(data::shuffle_batches(10, 0, 9), std::invalid_argument);
}

TEST_CASE("shuffle_batches is a bijection on indices for every seed") {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 991ull}) {
    const auto batches = data::shuffle_batches(37, 8, seed);
    std::set<std::size_t> seen;
    for (const auto& b : batches)
      for (std::size_t idx : b.indices) {
        CHECK(idx < 37);
        CHECK(seen.insert(idx).second);  // no duplicates
      }
    CHECK(seen.size() == 37);
  }
}

TEST_CASE("dataset round trip is byte-stable") {
  const auto log = make_log(5.0, 1.5, 6);
  const auto seqs = data::form_sequences(log, 1.0);
  TempDir dir;
  const auto p1 = dir.path / "a.pnsd";
  const auto p2 = dir.path / "b.pnsd";
  data::write_dataset(seqs, p1);
  const auto loaded = data::read_dataset(p1);
  REQUIRE(loaded.size() == seqs.size());
  data::write_dataset(loaded, p2);
  CHECK(slurp(p1) == slurp(p2));

  // Values survive at f32 precision.
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    CHECK(loaded[i].image == seqs[i].image);
    CHECK(loaded[i].v_applied == static_cast<double>(static_cast<float>(seqs[i].v_applied)));
    CHECK(loaded[i].mean_slip == static_cast<double>(static_cast<float>(seqs[i].mean_slip)));
    for (int k = 0; k < sim::kProprioDim; ++k)
      CHECK(loaded[i].proprio[k] ==
            static_cast<double>(static_cast<float>(seqs[i].proprio[k])));
    CHECK(loaded[i].runlog_id == seqs[i].runlog_id);
    CHECK(loaded[i].window_index == seqs[i].window_index);
  }
}

TEST_CASE("empty dataset with a valid header reads back empty") {
  TempDir dir;
  const auto p = dir.path / "empty.pnsd";
  data::write_dataset({}, p);
  CHECK(data::read_dataset(p).empty());
}

TEST_CASE("truncated dataset reports the last complete record") {
  const auto log = make_log(5.0, 1.5, 7);
  const auto seqs = data::form_sequences(log, 1.0);
  TempDir dir;
  const auto p = dir.path / "t.pnsd";
  data::write_dataset(seqs, p);
  const auto bytes = slurp(p);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 100));
  out.close();
  try {
    data::read_dataset(p);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("last complete record 3") != std::string::npos);
  }
}

TEST_CASE("dataset version mismatch is rejected") {
  TempDir dir;
  const auto p = dir.path / "v.pnsd";
  data::write_dataset({}, p);
  auto bytes = slurp(p);
  bytes[4] = 99;  // version field
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  try {
    data::read_dataset(p);
    FAIL("expected a version error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("version mismatch") != std::string::npos);
  }
}

#include "panos/data/dataset_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace panos::data {

static_assert(std::endian::native == std::endian::little,
              "dataset format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'P', 'N', 'S', 'D'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kRecordBytes =
    sim::kImagePixels * 4 + sim::kProprioDim * 4 + 4 + 4 + 4 + 4;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_dataset(const std::vector<Sequence>& sequences,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open dataset for writing: " + path.string());
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, static_cast<std::uint64_t>(sequences.size()));
  for (const auto& s : sequences) {
    if (s.image.size() != static_cast<std::size_t>(sim::kImagePixels))
      throw std::invalid_argument("sequence image has wrong size");
    out.write(reinterpret_cast<const char*>(s.image.data()),
              static_cast<std::streamsize>(s.image.size() * 4));
    for (double x : s.proprio) put(out, static_cast<float>(x));
    put(out, static_cast<float>(s.v_applied));
    put(out, static_cast<float>(s.mean_slip));
    put(out, s.runlog_id);
    put(out, s.window_index);
  }
  if (!out) throw std::runtime_error("dataset write failed: " + path.string());
}

std::vector<Sequence> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a PNSD dataset file: " + path.string());
  const auto version = get<std::uint16_t>(in);
  if (version != kVersion)
    throw std::runtime_error("dataset version mismatch: got " + std::to_string(version) +
                             ", expected " + std::to_string(kVersion));
  const auto count = get<std::uint64_t>(in);
  if (!in) throw std::runtime_error("dataset header truncated");

  std::vector<Sequence> out;
  out.reserve(count);
  std::vector<char> buf(kRecordBytes);
  for (std::uint64_t i = 0; i < count; ++i) {
    in.read(buf.data(), static_cast<std::streamsize>(kRecordBytes));
    if (!in)
      throw std::runtime_error("dataset parse error: truncated after record " +
                               std::to_string(i == 0 ? 0 : i - 1) + " of " +
                               std::to_string(count) + " (last complete record " +
                               (i == 0 ? std::string("none") : std::to_string(i - 1)) + ")");
    Sequence s;
    const char* p = buf.data();
    s.image.resize(sim::kImagePixels);
    std::memcpy(s.image.data(), p, sim::kImagePixels * 4);
    p += sim::kImagePixels * 4;
    for (int k = 0; k < sim::kProprioDim; ++k) {
      float f;
      std::memcpy(&f, p, 4);
      p += 4;
      s.proprio[k] = f;
    }
    float v, slip;
    std::memcpy(&v, p, 4); p += 4;
    std::memcpy(&slip, p, 4); p += 4;
    s.v_applied = v;
    s.mean_slip = slip;
    std::memcpy(&s.runlog_id, p, 4); p += 4;
    std::memcpy(&s.window_index, p, 4);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace panos::data

#include "panos/net/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace panos::net {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'P', 'N', 'S', 'W'};
constexpr std::uint16_t kVersion = 1;

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

void put_block(std::ofstream& out, const std::string& name, const double* data,
               std::size_t count) {
  put(out, static_cast<std::uint16_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  put(out, static_cast<std::uint64_t>(count));
  for (std::size_t i = 0; i < count; ++i) put(out, static_cast<float>(data[i]));
}

void get_block(std::ifstream& in, const std::string& expected, double* data,
               std::size_t count) {
  const auto name_len = get<std::uint16_t>(in);
  std::string name(name_len, '\0');
  in.read(name.data(), name_len);
  if (!in || name != expected)
    throw std::runtime_error("checkpoint block mismatch: expected '" + expected +
                             "', got '" + name + "'");
  const auto n = get<std::uint64_t>(in);
  if (n != count)
    throw std::runtime_error("checkpoint block '" + expected + "' has wrong size");
  std::vector<float> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (!in) throw std::runtime_error("checkpoint truncated in block '" + expected + "'");
  for (std::size_t i = 0; i < count; ++i) data[i] = buf[i];
}

}  // namespace

void write_checkpoint(const ModelParams& p, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  const auto& c = p.config;
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, static_cast<std::uint32_t>(c.n_v));
  put(out, static_cast<std::uint32_t>(c.d_v));
  put(out, static_cast<std::uint32_t>(c.d_p));
  put(out, static_cast<std::uint32_t>(c.encoder_hidden));
  put(out, static_cast<std::uint32_t>(c.mlp_hidden));
  put(out, c.tokenizer_seed);
  put(out, c.param_seed);
  put(out, c.hash());

  put_block(out, "tokenizer", p.tokenizer.data(), static_cast<std::size_t>(p.tokenizer.size()));
  put_block(out, "enc_w1", p.enc_w1.data(), static_cast<std::size_t>(p.enc_w1.size()));
  put_block(out, "enc_b1", p.enc_b1.data(), static_cast<std::size_t>(p.enc_b1.size()));
  put_block(out, "enc_w2", p.enc_w2.data(), static_cast<std::size_t>(p.enc_w2.size()));
  put_block(out, "enc_b2", p.enc_b2.data(), static_cast<std::size_t>(p.enc_b2.size()));
  put_block(out, "query", p.query.data(), static_cast<std::size_t>(p.query.size()));
  put_block(out, "head_w1", p.head_w1.data(), static_cast<std::size_t>(p.head_w1.size()));
  put_block(out, "head_b1", p.head_b1.data(), static_cast<std::size_t>(p.head_b1.size()));
  put_block(out, "head_w2", p.head_w2.data(), static_cast<std::size_t>(p.head_w2.size()));
  put_block(out, "head_b2", &p.head_b2, 1);
  put_block(out, "alpha_raw", &p.alpha_raw, 1);
  if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

ModelParams read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a PNSW checkpoint: " + path.string());
  if (get<std::uint16_t>(in) != kVersion)
    throw std::runtime_error("checkpoint version mismatch");

  ModelConfig c;
  c.n_v = static_cast<int>(get<std::uint32_t>(in));
  c.d_v = static_cast<int>(get<std::uint32_t>(in));
  c.d_p = static_cast<int>(get<std::uint32_t>(in));
  c.encoder_hidden = static_cast<int>(get<std::uint32_t>(in));
  c.mlp_hidden = static_cast<int>(get<std::uint32_t>(in));
  c.tokenizer_seed = get<std::uint64_t>(in);
  c.param_seed = get<std::uint64_t>(in);
  const auto stored_hash = get<std::uint64_t>(in);
  if (stored_hash != c.hash())
    throw std::runtime_error("checkpoint config hash mismatch");
  if (c.d_p != sim::kProprioDim)
    throw std::runtime_error("checkpoint proprio dimension mismatch");

  ModelParams p;
  p.config = c;
  p.tokenizer.resize(c.d_v, c.patch_dim());
  p.enc_w1.resize(c.encoder_hidden, c.d_p);
  p.enc_b1.resize(c.encoder_hidden);
  p.enc_w2.resize(c.d_p, c.encoder_hidden);
  p.enc_b2.resize(c.d_p);
  p.query.resize(c.d_v, c.d_p);
  p.head_w1.resize(c.mlp_hidden, c.d_v);
  p.head_b1.resize(c.mlp_hidden);
  p.head_w2.resize(c.mlp_hidden);

  get_block(in, "tokenizer", p.tokenizer.data(), static_cast<std::size_t>(p.tokenizer.size()));
  get_block(in, "enc_w1", p.enc_w1.data(), static_cast<std::size_t>(p.enc_w1.size()));
  get_block(in, "enc_b1", p.enc_b1.data(), static_cast<std::size_t>(p.enc_b1.size()));
  get_block(in, "enc_w2", p.enc_w2.data(), static_cast<std::size_t>(p.enc_w2.size()));
  get_block(in, "enc_b2", p.enc_b2.data(), static_cast<std::size_t>(p.enc_b2.size()));
  get_block(in, "query", p.query.data(), static_cast<std::size_t>(p.query.size()));
  get_block(in, "head_w1", p.head_w1.data(), static_cast<std::size_t>(p.head_w1.size()));
  get_block(in, "head_b1", p.head_b1.data(), static_cast<std::size_t>(p.head_b1.size()));
  get_block(in, "head_w2", p.head_w2.data(), static_cast<std::size_t>(p.head_w2.size()));
  get_block(in, "head_b2", &p.head_b2, 1);
  get_block(in, "alpha_raw", &p.alpha_raw, 1);
  p.check_finite();
  return p;
}

}  // namespace panos::net

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "panos/net/checkpoint.hpp"
#include "panos/net/model.hpp"
#include "panos/rng.hpp"
#include "panos/sim/world.hpp"

using namespace panos;
namespace fs = std::filesystem;

namespace {

data::Sequence make_sequence(std::uint64_t seed) {
  const auto terrain = sim::make_terrain(sim::TerrainClass::Gravel, seed);
  data::Sequence s;
  s.image = sim::render_observation(terrain, 1.0);
  Rng rng(seed);
  sim::ProprioState p;
  for (auto& x : p.joint_velocity) x = 2.0 * rng.gaussian();
  for (auto& x : p.joint_effort) x = 20.0 * rng.gaussian();
  for (auto& x : p.hip_position) x = 0.03 * rng.gaussian();
  for (auto& x : p.hip_velocity) x = 0.3 * rng.gaussian();
  for (auto& f : p.foot_position)
    for (auto& x : f) x = 0.2 * rng.gaussian();
  for (auto& f : p.foot_velocity)
    for (auto& x : f) x = rng.gaussian();
  for (auto& x : p.foot_slip) x = rng.uniform(0.0, 0.6);
  s.proprio = p.flatten();
  s.v_applied = rng.uniform(0.3, 2.5);
  s.mean_slip = p.mean_slip();
  return s;
}

}  // namespace

TEST_CASE("softplus and sigmoid basics") {
  CHECK(net::softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(net::softplus(-40.0) > 0.0);
  CHECK(net::softplus(50.0) == doctest::Approx(50.0));
  CHECK(net::sigmoid(0.0) == doctest::Approx(0.5));
  CHECK(net::sigmoid(3.0) + net::sigmoid(-3.0) == doctest::Approx(1.0));
}

TEST_CASE("parameter init is deterministic and seed-sensitive") {
  const net::ModelConfig cfg;
  const auto a = net::ModelParams::init(cfg);
  const auto b = net::ModelParams::init(cfg);
  CHECK(a.tokenizer == b.tokenizer);
  CHECK(a.enc_w1 == b.enc_w1);
  CHECK(a.query == b.query);
  CHECK(a.head_w2 == b.head_w2);

  net::ModelConfig cfg2 = cfg;
  cfg2.tokenizer_seed = 4321;
  const auto c = net::ModelParams::init(cfg2);
  CHECK(c.tokenizer != a.tokenizer);
  // Trainable parameters only depend on param_seed.
  CHECK(c.enc_w1 == a.enc_w1);
  CHECK(c.head_w1 == a.head_w1);

  CHECK(a.tokenizer.rows() == 64);
  CHECK(a.tokenizer.cols() == 768);
  CHECK(a.alpha() == doctest::Approx(std::log(2.0)));  // alpha_raw starts at 0
}

TEST_CASE("tokenize_image matches a brute-force patch projection") {
  const net::ModelConfig cfg;
  const auto params = net::ModelParams::init(cfg);
  const auto seq = make_sequence(5);
  const auto tokens = net::tokenize_image(seq.image, params);
  REQUIRE(tokens.rows() == cfg.n_v);
  REQUIRE(tokens.cols() == cfg.d_v);

  // Independent recomputation for patch (row 2, col 1): row-major pixel walk.
  const int pr = 2, pc = 1, ps = cfg.patch_size();
  Eigen::VectorXd patch(cfg.patch_dim());
  int k = 0;
  for (int r = 0; r < ps; ++r)
    for (int c = 0; c < ps; ++c)
      for (int ch = 0; ch < 3; ++ch)
        patch[k++] = seq.image[(((pr * ps + r) * sim::kImageSize) + pc * ps + c) * 3 + ch];
  const Eigen::VectorXd expect = params.tokenizer * patch;
  const int token_index = pr * (sim::kImageSize / ps) + pc;
  for (int j = 0; j < cfg.d_v; ++j)
    REQUIRE(tokens(token_index, j) == doctest::Approx(expect[j]).epsilon(1e-12));
}

TEST_CASE("tokenize_image rejects malformed frames") {
  const auto params = net::ModelParams::init({});
  sim::ObservationFrame bad(100, 0.0f);
  CHECK_THROWS_AS(net::tokenize_image(bad, params), std::invalid_argument);
}

TEST_CASE("encode_proprio output is bounded and input-validated") {
  const auto params = net::ModelParams::init({});
  const auto seq = make_sequence(8);
  const auto f = net::encode_proprio(seq.proprio, params);
  REQUIRE(f.size() == sim::kProprioDim);
  for (int i = 0; i < f.size(); ++i) {
    CHECK(f[i] > -1.0);
    CHECK(f[i] < 1.0);
  }
  auto bad = seq.proprio;
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(net::encode_proprio(bad, params), std::invalid_argument);
}

TEST_CASE("scale_proprio divides each block by its nominal magnitude") {
  std::array<double, sim::kProprioDim> p{};
  for (int i = 0; i < sim::kProprioDim; ++i) p[i] = 1.0;
  const auto s = net::scale_proprio(p);
  CHECK(s[0] == doctest::Approx(1.0 / 3.0));    // joint velocity
  CHECK(s[12] == doctest::Approx(1.0 / 30.0));  // joint effort
  CHECK(s[24] == doctest::Approx(1.0 / 0.05));  // hip position
  CHECK(s[56] == doctest::Approx(1.0 / 0.3));   // foot slip
}

TEST_CASE("attention weights form a simplex and match a softmax oracle") {
  const net::ModelConfig cfg;
  const auto params = net::ModelParams::init(cfg);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto seq = make_sequence(100 + seed);
    const auto tokens = net::tokenize_image(seq.image, params);
    const auto feats = net::encode_proprio(seq.proprio, params);
    Eigen::VectorXd w, ctx;
    net::attend(feats, tokens, params, w, ctx);

    REQUIRE(w.size() == cfg.n_v);
    double sum = 0.0;
    for (int i = 0; i < w.size(); ++i) {
      REQUIRE(w[i] >= 0.0);
      sum += w[i];
    }
    REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));

    // Naive softmax over q.k/sqrt(d_v), no max subtraction.
    const Eigen::VectorXd q = params.query * feats;
    Eigen::VectorXd expect(cfg.n_v);
    double z = 0.0;
    for (int i = 0; i < cfg.n_v; ++i) {
      expect[i] = std::exp(tokens.row(i).dot(q) / std::sqrt(double(cfg.d_v)));
      z += expect[i];
    }
    expect /= z;
    Eigen::VectorXd ctx_expect = Eigen::VectorXd::Zero(cfg.d_v);
    for (int i = 0; i < cfg.n_v; ++i) ctx_expect += expect[i] * tokens.row(i).transpose();
    for (int i = 0; i < cfg.n_v; ++i)
      REQUIRE(w[i] == doctest::Approx(expect[i]).epsilon(1e-9));
    for (int j = 0; j < cfg.d_v; ++j)
      REQUIRE(ctx[j] == doctest::Approx(ctx_expect[j]).epsilon(1e-9));
  }
}

TEST_CASE("confidence is 1 - mean slip and range-checked") {
  auto seq = make_sequence(3);
  seq.mean_slip = 0.37;
  CHECK(net::confidence(seq) == doctest::Approx(0.63));
  seq.mean_slip = -0.01;
  CHECK_THROWS_AS(net::confidence(seq), std::invalid_argument);
  seq.mean_slip = 1.2;
  CHECK_THROWS_AS(net::confidence(seq), std::invalid_argument);
}

TEST_CASE("forward: nonnegative velocity, score equals confidence, token caching agrees") {
  const auto params = net::ModelParams::init({});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto seq = make_sequence(200 + seed);
    const auto tr = net::forward(seq, params);
    CHECK(tr.v_hat >= 0.0);
    CHECK(tr.confidence == doctest::Approx(1.0 - seq.mean_slip));
    CHECK(tr.score == tr.confidence);

    const auto tokens = net::tokenize_image(seq.image, params);
    const auto tr2 = net::forward_from_tokens(tokens, seq.proprio, seq.mean_slip, params);
    CHECK(tr.v_hat == tr2.v_hat);
    CHECK(tr.context == tr2.context);
    CHECK(tr.attention_weights == tr2.attention_weights);
  }
}

TEST_CASE("select: top-K by score, ties to lower index, output ascending") {
  auto t = [](double score) {
    net::ForwardTrace tr;
    tr.score = score;
    return tr;
  };
  const std::vector<net::ForwardTrace> traces = {t(0.2), t(0.9), t(0.9), t(0.5), t(0.1)};
  CHECK(net::select(traces, 1) == std::vector<std::size_t>{1});
  CHECK(net::select(traces, 2) == std::vector<std::size_t>{1, 2});
  CHECK(net::select(traces, 3) == std::vector<std::size_t>{1, 2, 3});
  CHECK(net::select(traces, 99) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(net::select(traces, 0), std::invalid_argument);
}

TEST_CASE("checkpoint round trip preserves every parameter bit-for-bit at f32") {
  net::ModelConfig cfg;
  cfg.tokenizer_seed = 42;
  cfg.param_seed = 43;
  auto params = net::ModelParams::init(cfg);
  params.alpha_raw = 1.25;
  params.head_b2 = -0.5;

  const auto dir = fs::temp_directory_path() / "panos_ckpt_test";
  fs::create_directories(dir);
  const auto path = dir / "m.pnsw";
  net::write_checkpoint(params, path);
  const auto loaded = net::read_checkpoint(path);

  CHECK(loaded.config.hash() == cfg.hash());
  auto same_f32 = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (static_cast<float>(a(i)) != static_cast<float>(b(i))) return false;
    return true;
  };
  CHECK(same_f32(params.tokenizer, loaded.tokenizer));
  CHECK(same_f32(params.enc_w1, loaded.enc_w1));
  CHECK(same_f32(params.enc_w2, loaded.enc_w2));
  CHECK(same_f32(params.query, loaded.query));
  CHECK(same_f32(params.head_w1, loaded.head_w1));
  CHECK(static_cast<float>(loaded.head_b2) == static_cast<float>(params.head_b2));
  CHECK(static_cast<float>(loaded.alpha_raw) == 1.25f);

  // Loading twice and re-writing must be byte identical.
  const auto path2 = dir / "m2.pnsw";
  net::write_checkpoint(loaded, path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  std::vector<char> b1{std::istreambuf_iterator<char>(f1), {}};
  std::vector<char> b2{std::istreambuf_iterator<char>(f2), {}};
  CHECK(b1 == b2);
  fs::remove_all(dir);
}

TEST_CASE("checkpoint rejects corrupted headers") {
  const auto params = net::ModelParams::init({});
  const auto dir = fs::temp_directory_path() / "panos_ckpt_bad";
  fs::create_directories(dir);
  const auto path = dir / "m.pnsw";
  net::write_checkpoint(params, path);

  std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
  f.seekp(0);
  f.write("XXXX", 4);
  f.close();
  CHECK_THROWS_AS(net::read_checkpoint(path), std::runtime_error);
  fs::remove_all(dir);
}

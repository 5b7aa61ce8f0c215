#include "panos/net/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "panos/hash.hpp"
#include "panos/rng.hpp"

namespace panos::net {

std::uint64_t ModelConfig::hash() const {
  std::uint64_t h = fnv1a64("panos-model-v1");
  for (std::uint64_t v : {static_cast<std::uint64_t>(n_v), static_cast<std::uint64_t>(d_v),
                          static_cast<std::uint64_t>(d_p),
                          static_cast<std::uint64_t>(encoder_hidden),
                          static_cast<std::uint64_t>(mlp_hidden), tokenizer_seed, param_seed})
    h = fnv1a64_u64(v, h);
  return h;
}

namespace {

// Uniform fan-in init: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
void init_matrix(Eigen::Ref<Eigen::MatrixXd> m, Rng& rng, int fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-bound, bound);
}

}  // namespace

ModelParams ModelParams::init(const ModelConfig& cfg) {
  ModelParams p;
  p.config = cfg;

  // Tokenizer seed is distinct from the trainable-parameter seed.
  Rng tok_rng(cfg.tokenizer_seed);
  p.tokenizer.resize(cfg.d_v, cfg.patch_dim());
  init_matrix(p.tokenizer, tok_rng, cfg.patch_dim());

  Rng rng(cfg.param_seed);
  p.enc_w1.resize(cfg.encoder_hidden, cfg.d_p);
  init_matrix(p.enc_w1, rng, cfg.d_p);
  p.enc_b1 = Eigen::VectorXd::Zero(cfg.encoder_hidden);
  p.enc_w2.resize(cfg.d_p, cfg.encoder_hidden);
  init_matrix(p.enc_w2, rng, cfg.encoder_hidden);
  p.enc_b2 = Eigen::VectorXd::Zero(cfg.d_p);
  p.query.resize(cfg.d_v, cfg.d_p);
  init_matrix(p.query, rng, cfg.d_p);
  p.head_w1.resize(cfg.mlp_hidden, cfg.d_v);
  init_matrix(p.head_w1, rng, cfg.d_v);
  p.head_b1 = Eigen::VectorXd::Zero(cfg.mlp_hidden);
  p.head_w2.resize(cfg.mlp_hidden);
  init_matrix(p.head_w2, rng, cfg.mlp_hidden);
  p.head_b2 = 0.0;
  p.alpha_raw = 0.0;
  return p;
}

double softplus(double x) {
  if (x > 30.0) return x;
  return std::log1p(std::exp(x));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double ModelParams::alpha() const { return softplus(alpha_raw); }

void ModelParams::check_finite() const {
  auto ok = [](const Eigen::MatrixXd& m) { return m.allFinite(); };
  if (!(ok(tokenizer) && ok(enc_w1) && ok(enc_b1) && ok(enc_w2) && ok(enc_b2) &&
        ok(query) && ok(head_w1) && ok(head_b1) && ok(head_w2) &&
        std::isfinite(head_b2) && std::isfinite(alpha_raw)))
    throw std::runtime_error("model parameters contain non-finite values");
}

Eigen::VectorXd scale_proprio(const std::array<double, sim::kProprioDim>& p) {
  // Block layout matches ProprioState::flatten. Scales are nominal signal
  // magnitudes, fixed by the architecture (not learned).
  static constexpr double kScale[7] = {3.0, 30.0, 0.05, 0.5, 0.35, 2.0, 0.3};
  static constexpr int kBlockEnd[7] = {12, 24, 28, 32, 44, 56, 60};
  Eigen::VectorXd out(sim::kProprioDim);
  int block = 0;
  for (int i = 0; i < sim::kProprioDim; ++i) {
    while (i >= kBlockEnd[block]) ++block;
    out[i] = p[i] / kScale[block];
  }
  return out;
}

Eigen::MatrixXd tokenize_image(const sim::ObservationFrame& image,
                               const ModelParams& params) {
  const auto& cfg = params.config;
  if (image.size() != static_cast<std::size_t>(sim::kImagePixels))
    throw std::invalid_argument("tokenize_image: wrong image shape");
  const int ps = cfg.patch_size();
  const int patches_per_side = sim::kImageSize / ps;

  Eigen::MatrixXd tokens(cfg.n_v, cfg.d_v);
  Eigen::VectorXd patch(cfg.patch_dim());
  for (int pr = 0; pr < patches_per_side; ++pr) {
    for (int pc = 0; pc < patches_per_side; ++pc) {
      int k = 0;
      for (int r = 0; r < ps; ++r) {
        const int row = pr * ps + r;
        const float* src = image.data() + (row * sim::kImageSize + pc * ps) * 3;
        for (int c = 0; c < ps * 3; ++c) patch[k++] = src[c];
      }
      tokens.row(pr * patches_per_side + pc) = (params.tokenizer * patch).transpose();
    }
  }
  return tokens;
}

Eigen::VectorXd encode_proprio(const std::array<double, sim::kProprioDim>& p,
                               const ModelParams& params, ForwardCache* cache) {
  for (double x : p)
    if (!std::isfinite(x)) throw std::invalid_argument("encode_proprio: non-finite input");
  Eigen::VectorXd scaled = scale_proprio(p);
  Eigen::VectorXd h1 = (params.enc_w1 * scaled + params.enc_b1).array().tanh();
  Eigen::VectorXd out = (params.enc_w2 * h1 + params.enc_b2).array().tanh();
  if (cache) {
    cache->proprio_scaled = std::move(scaled);
    cache->enc_h1 = std::move(h1);
  }
  return out;
}

void attend(const Eigen::VectorXd& proprio_features, const Eigen::MatrixXd& tokens,
            const ModelParams& params, Eigen::VectorXd& weights_out,
            Eigen::VectorXd& context_out, ForwardCache* cache) {
  if (proprio_features.size() != params.config.d_p || tokens.cols() != params.config.d_v)
    throw std::invalid_argument("attend: shape mismatch");
  Eigen::VectorXd q = params.query * proprio_features;
  const double inv_sqrt_dv = 1.0 / std::sqrt(static_cast<double>(params.config.d_v));
  Eigen::VectorXd logits = tokens * q * inv_sqrt_dv;
  const double m = logits.maxCoeff();
  Eigen::VectorXd w = (logits.array() - m).exp();
  w /= w.sum();
  weights_out = w;
  context_out = tokens.transpose() * w;
  if (cache) cache->q = std::move(q);
}

double confidence(const data::Sequence& seq) {
  if (!(seq.mean_slip >= 0.0 && seq.mean_slip <= 1.0))
    throw std::invalid_argument("confidence: mean_slip outside [0,1]");
  return 1.0 - seq.mean_slip;
}

ForwardTrace forward_from_tokens(const Eigen::MatrixXd& tokens,
                                 const std::array<double, sim::kProprioDim>& proprio,
                                 double mean_slip, const ModelParams& params,
                                 ForwardCache* cache) {
  if (!(mean_slip >= 0.0 && mean_slip <= 1.0))
    throw std::invalid_argument("forward: mean_slip outside [0,1]");
  ForwardTrace tr;
  tr.visual_tokens = tokens;
  tr.proprio_features = encode_proprio(proprio, params, cache);
  attend(tr.proprio_features, tr.visual_tokens, params, tr.attention_weights,
         tr.context, cache);
  Eigen::VectorXd h = (params.head_w1 * tr.context + params.head_b1).array().tanh();
  const double z = params.head_w2.dot(h) + params.head_b2;
  tr.v_hat = softplus(z);
  tr.confidence = 1.0 - mean_slip;
  tr.score = tr.confidence;
  if (cache) {
    cache->head_h = std::move(h);
    cache->head_z = z;
  }
  return tr;
}

ForwardTrace forward(const data::Sequence& seq, const ModelParams& params,
                     ForwardCache* cache) {
  return forward_from_tokens(tokenize_image(seq.image, params), seq.proprio,
                             seq.mean_slip, params, cache);
}

std::vector<std::size_t> select(const std::vector<ForwardTrace>& traces, std::size_t k) {
  if (k < 1) throw std::invalid_argument("select: K must be >= 1");
  k = std::min(k, traces.size());
  std::vector<std::size_t> order(traces.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Highest score first; ties broken by lower sequence index.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return traces[a].score > traces[b].score;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace panos::net

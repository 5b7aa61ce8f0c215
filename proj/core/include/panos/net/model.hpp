#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "panos/data/sequence.hpp"

namespace panos::net {

struct ModelConfig {
  int n_v = 16;            // visual tokens per image (64/16)^2
  int d_v = 64;            // token dimension
  int d_p = sim::kProprioDim;
  int encoder_hidden = 60; // proprio encoder hidden width
  int mlp_hidden = 32;     // velocity head hidden width
  std::uint64_t tokenizer_seed = 1234;
  std::uint64_t param_seed = 5678;

  int patch_size() const { return 16; }
  int patch_dim() const { return patch_size() * patch_size() * 3; }  // 768
  std::uint64_t hash() const;
};

/// All model parameters. The tokenizer projection is frozen: it is seeded at
/// construction and never receives gradients.
struct ModelParams {
  ModelConfig config;
  Eigen::MatrixXd tokenizer;  // d_v x patch_dim, frozen
  Eigen::MatrixXd enc_w1;     // encoder_hidden x d_p
  Eigen::VectorXd enc_b1;
  Eigen::MatrixXd enc_w2;     // d_p x encoder_hidden
  Eigen::VectorXd enc_b2;
  Eigen::MatrixXd query;      // d_v x d_p
  Eigen::MatrixXd head_w1;    // mlp_hidden x d_v
  Eigen::VectorXd head_b1;
  Eigen::RowVectorXd head_w2; // 1 x mlp_hidden
  double head_b2 = 0.0;
  double alpha_raw = 0.0;     // alpha = softplus(alpha_raw)

  static ModelParams init(const ModelConfig& cfg);
  double alpha() const;
  void check_finite() const;
};

/// Per-sequence forward products exposed to selection and the controllers.
struct ForwardTrace {
  Eigen::MatrixXd visual_tokens;     // n_v x d_v
  Eigen::VectorXd proprio_features;  // d_p
  Eigen::VectorXd attention_weights; // n_v, simplex
  Eigen::VectorXd context;           // d_v
  double confidence = 0.0;           // 1 - mean_slip
  double v_hat = 0.0;                // m/s, >= 0
  double score = 0.0;                // selection key (= confidence)
};

/// Hidden activations kept alongside a trace for backprop.
struct ForwardCache {
  Eigen::VectorXd proprio_scaled;  // encoder input
  Eigen::VectorXd enc_h1;          // tanh(W1 p + b1)
  Eigen::VectorXd q;               // query
  Eigen::VectorXd head_h;          // tanh hidden
  double head_z = 0.0;             // pre-softplus output
};

double softplus(double x);
double sigmoid(double x);

/// Fixed per-field scaling applied before the proprio encoder (raw efforts
/// are tens of N*m; tanh layers need unit-scale inputs).
Eigen::VectorXd scale_proprio(const std::array<double, sim::kProprioDim>& p);

/// Split the image into 16 non-overlapping 16x16 patches, flatten each
/// (row, col, channel order) and apply the frozen projection. No offset term.
Eigen::MatrixXd tokenize_image(const sim::ObservationFrame& image,
                               const ModelParams& params);

/// Two dense tanh layers; output dimension equals input dimension d_p.
Eigen::VectorXd encode_proprio(const std::array<double, sim::kProprioDim>& p,
                               const ModelParams& params,
                               ForwardCache* cache = nullptr);

/// Scaled dot-product attention of a projected proprio query over the visual
/// tokens; returns (weights, context = weighted token sum).
void attend(const Eigen::VectorXd& proprio_features, const Eigen::MatrixXd& tokens,
            const ModelParams& params, Eigen::VectorXd& weights_out,
            Eigen::VectorXd& context_out, ForwardCache* cache = nullptr);

/// Confidence_t = 1 - mean slip. Throws if slip is outside [0,1].
double confidence(const data::Sequence& seq);

ForwardTrace forward(const data::Sequence& seq, const ModelParams& params,
                     ForwardCache* cache = nullptr);

/// Same forward but reusing precomputed visual tokens (the tokenizer is
/// frozen, so tokens can be cached per sequence across training steps).
ForwardTrace forward_from_tokens(const Eigen::MatrixXd& tokens,
                                 const std::array<double, sim::kProprioDim>& proprio,
                                 double mean_slip, const ModelParams& params,
                                 ForwardCache* cache = nullptr);

/// Indices of the K highest-score traces; ties broken by lower index.
std::vector<std::size_t> select(const std::vector<ForwardTrace>& traces, std::size_t k);

}  // namespace panos::net

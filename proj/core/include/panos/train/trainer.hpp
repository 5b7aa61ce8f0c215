#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "panos/net/model.hpp"

namespace panos::train {

struct LossBreakdown {
  double velocity_loss = 0.0;  // m^2/s^2, mean over selected
  double slip_loss = 0.0;      // mean slip over selected
  double alpha = 0.0;
  double total = 0.0;          // max(0, velocity_loss - alpha*slip_loss)
};

/// total = max(0, velocity_loss - alpha*slip_loss).
double clamped_total(double velocity_loss, double slip_loss, double alpha);

/// Losses over an already-selected subset; traces[i] pairs with
/// (v_applied[i], slip via trace confidence). Throws on empty selection.
LossBreakdown compute_losses(std::span<const net::ForwardTrace> traces,
                             std::span<const double> v_applied, double alpha);

struct TrainConfig {
  int epochs = 150;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  double selection_fraction = 0.5;  // (0,1]
  std::uint64_t seed = 7;
  int checkpoint_interval = 50;     // epochs
  double alpha_decay = 1e-3;        // weight decay on alpha_raw

  void validate() const;
};

/// Gradients for every trainable parameter. The frozen tokenizer has no slot.
struct Gradients {
  Eigen::MatrixXd enc_w1;
  Eigen::VectorXd enc_b1;
  Eigen::MatrixXd enc_w2;
  Eigen::VectorXd enc_b2;
  Eigen::MatrixXd query;
  Eigen::MatrixXd head_w1;
  Eigen::VectorXd head_b1;
  Eigen::RowVectorXd head_w2;
  double head_b2 = 0.0;
  double alpha_raw = 0.0;

  static Gradients zero(const net::ModelConfig& cfg);
};

/// One selected sequence as the backward pass sees it.
struct BatchItem {
  const Eigen::MatrixXd* tokens = nullptr;  // n_v x d_v, cached
  const std::array<double, sim::kProprioDim>* proprio = nullptr;
  double v_applied = 0.0;
  double mean_slip = 0.0;
};

/// Exact reverse-mode gradients of the clamped total loss. When the loss is
/// clamped at zero, all gradients are exactly zero. Throws a numeric-failure
/// error naming the parameter on non-finite gradients.
Gradients backward(std::span<const BatchItem> items,
                   std::span<const net::ForwardTrace> traces,
                   std::span<const net::ForwardCache> caches,
                   const net::ModelParams& params, const LossBreakdown& loss);

struct AdamState {
  Gradients m, v;
  std::int64_t t = 0;
  static AdamState zero(const net::ModelConfig& cfg);
};

/// Adam with bias correction (0.9/0.999), plus decoupled weight decay on
/// alpha_raw only. alpha is kept <= 10 (softplus-domain clamp).
void adam_update(net::ModelParams& params, const Gradients& g, AdamState& state,
                 double lr, double alpha_decay);

struct EpochStats {
  double velocity_loss = 0.0;
  double slip_loss = 0.0;
  double alpha = 0.0;
  double total = 0.0;
};

struct FitResult {
  net::ModelParams params;
  std::vector<EpochStats> curve;
  std::filesystem::path last_checkpoint;  // empty if none written
};

/// Full training loop: shuffle, forward, top-K selection by confidence,
/// losses, backward, Adam. Deterministic for a fixed seed. Visual tokens are
/// computed once per sequence (the tokenizer is frozen). If checkpoint_path
/// is nonempty, a checkpoint is written every checkpoint_interval epochs.
FitResult fit(const std::vector<data::Sequence>& dataset, const TrainConfig& tc,
              const net::ModelConfig& mc,
              const std::filesystem::path& checkpoint_path = {});

/// Training curve CSV: header then one row per epoch.
void write_curve_csv(const std::vector<EpochStats>& curve,
                     const std::filesystem::path& path);

}  // namespace panos::train

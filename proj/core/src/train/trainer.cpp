#include "panos/train/trainer.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "panos/hash.hpp"
#include "panos/log.hpp"
#include "panos/net/checkpoint.hpp"

namespace panos::train {

double clamped_total(double velocity_loss, double slip_loss, double alpha) {
  return std::max(0.0, velocity_loss - alpha * slip_loss);
}

LossBreakdown compute_losses(std::span<const net::ForwardTrace> traces,
                             std::span<const double> v_applied, double alpha) {
  if (traces.empty()) throw std::invalid_argument("compute_losses: empty selection");
  if (traces.size() != v_applied.size())
    throw std::invalid_argument("compute_losses: traces/labels size mismatch");
  LossBreakdown lb;
  const double inv = 1.0 / static_cast<double>(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const double d = traces[i].v_hat - v_applied[i];
    lb.velocity_loss += d * d;
    lb.slip_loss += 1.0 - traces[i].confidence;  // slip = 1 - confidence
  }
  lb.velocity_loss *= inv;
  lb.slip_loss *= inv;
  lb.alpha = alpha;
  lb.total = clamped_total(lb.velocity_loss, lb.slip_loss, alpha);
  return lb;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (!(selection_fraction > 0.0 && selection_fraction <= 1.0))
    throw std::invalid_argument("selection_fraction must be in (0,1]");
  if (checkpoint_interval < 1) throw std::invalid_argument("checkpoint_interval must be >= 1");
  if (!(alpha_decay > 0.0)) throw std::invalid_argument("alpha_decay must be > 0");
}

Gradients Gradients::zero(const net::ModelConfig& c) {
  Gradients g;
  g.enc_w1 = Eigen::MatrixXd::Zero(c.encoder_hidden, c.d_p);
  g.enc_b1 = Eigen::VectorXd::Zero(c.encoder_hidden);
  g.enc_w2 = Eigen::MatrixXd::Zero(c.d_p, c.encoder_hidden);
  g.enc_b2 = Eigen::VectorXd::Zero(c.d_p);
  g.query = Eigen::MatrixXd::Zero(c.d_v, c.d_p);
  g.head_w1 = Eigen::MatrixXd::Zero(c.mlp_hidden, c.d_v);
  g.head_b1 = Eigen::VectorXd::Zero(c.mlp_hidden);
  g.head_w2 = Eigen::RowVectorXd::Zero(c.mlp_hidden);
  g.head_b2 = 0.0;
  g.alpha_raw = 0.0;
  return g;
}

Gradients backward(std::span<const BatchItem> items,
                   std::span<const net::ForwardTrace> traces,
                   std::span<const net::ForwardCache> caches,
                   const net::ModelParams& params, const LossBreakdown& loss) {
  if (items.size() != traces.size() || items.size() != caches.size())
    throw std::invalid_argument("backward: misaligned batch");
  Gradients g = Gradients::zero(params.config);
  if (loss.total <= 0.0) return g;  // clamped: constant function, zero gradients

  const double n = static_cast<double>(items.size());
  const double inv_sqrt_dv = 1.0 / std::sqrt(static_cast<double>(params.config.d_v));

  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& tr = traces[i];
    const auto& cc = caches[i];
    const double dv = 2.0 * (tr.v_hat - items[i].v_applied) / n;
    const double dz = dv * net::sigmoid(cc.head_z);

    // Velocity head.
    g.head_w2.noalias() += dz * cc.head_h.transpose();
    g.head_b2 += dz;
    Eigen::VectorXd dh = params.head_w2.transpose() * dz;
    Eigen::VectorXd dpre_h =
        dh.array() * (1.0 - cc.head_h.array().square());
    g.head_w1.noalias() += dpre_h * tr.context.transpose();
    g.head_b1 += dpre_h;
    Eigen::VectorXd dc = params.head_w1.transpose() * dpre_h;

    // Attention: c = T^T a, a = softmax(T q / sqrt(d_v)), q = W_q f.
    Eigen::VectorXd da = tr.visual_tokens * dc;
    const double s = tr.attention_weights.dot(da);
    Eigen::VectorXd dl = tr.attention_weights.array() * (da.array() - s);
    Eigen::VectorXd dq = tr.visual_tokens.transpose() * dl * inv_sqrt_dv;
    g.query.noalias() += dq * tr.proprio_features.transpose();
    Eigen::VectorXd df = params.query.transpose() * dq;

    // Proprio encoder (two tanh layers).
    Eigen::VectorXd dpre2 =
        df.array() * (1.0 - tr.proprio_features.array().square());
    g.enc_w2.noalias() += dpre2 * cc.enc_h1.transpose();
    g.enc_b2 += dpre2;
    Eigen::VectorXd dh1 = params.enc_w2.transpose() * dpre2;
    Eigen::VectorXd dpre1 = dh1.array() * (1.0 - cc.enc_h1.array().square());
    g.enc_w1.noalias() += dpre1 * cc.proprio_scaled.transpose();
    g.enc_b1 += dpre1;
  }

  // d total / d alpha_raw = -slip_loss * softplus'(alpha_raw).
  g.alpha_raw = -loss.slip_loss * net::sigmoid(params.alpha_raw);

  struct Named { const char* name; bool ok; };
  const Named checks[] = {
      {"enc_w1", g.enc_w1.allFinite()}, {"enc_b1", g.enc_b1.allFinite()},
      {"enc_w2", g.enc_w2.allFinite()}, {"enc_b2", g.enc_b2.allFinite()},
      {"query", g.query.allFinite()},   {"head_w1", g.head_w1.allFinite()},
      {"head_b1", g.head_b1.allFinite()}, {"head_w2", g.head_w2.allFinite()},
      {"head_b2", std::isfinite(g.head_b2)},
      {"alpha_raw", std::isfinite(g.alpha_raw)}};
  for (const auto& c : checks)
    if (!c.ok)
      throw std::runtime_error(std::string("numeric failure: non-finite gradient in ") +
                               c.name);
  return g;
}

AdamState AdamState::zero(const net::ModelConfig& cfg) {
  return AdamState{Gradients::zero(cfg), Gradients::zero(cfg), 0};
}

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;
// softplus(x) = 10 at x ~= 9.9999546; keeps alpha in (0, 10].
constexpr double kAlphaRawMax = 9.99995459;  // softplus(kAlphaRawMax) < 10

void adam_tensor(Eigen::Ref<Eigen::MatrixXd> p, const Eigen::MatrixXd& grad,
                 Eigen::Ref<Eigen::MatrixXd> m, Eigen::Ref<Eigen::MatrixXd> v,
                 double lr, double bc1, double bc2) {
  m = kBeta1 * m + (1.0 - kBeta1) * grad;
  v = kBeta2 * v.array().matrix() + (1.0 - kBeta2) * grad.array().square().matrix();
  p.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + kEps);
}

void adam_scalar(double& p, double grad, double& m, double& v, double lr,
                 double bc1, double bc2) {
  m = kBeta1 * m + (1.0 - kBeta1) * grad;
  v = kBeta2 * v + (1.0 - kBeta2) * grad * grad;
  p -= lr * (m / bc1) / (std::sqrt(v / bc2) + kEps);
}

}  // namespace

void adam_update(net::ModelParams& params, const Gradients& g, AdamState& st,
                 double lr, double alpha_decay) {
  st.t += 1;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(st.t));

  adam_tensor(params.enc_w1, g.enc_w1, st.m.enc_w1, st.v.enc_w1, lr, bc1, bc2);
  adam_tensor(params.enc_b1, g.enc_b1, st.m.enc_b1, st.v.enc_b1, lr, bc1, bc2);
  adam_tensor(params.enc_w2, g.enc_w2, st.m.enc_w2, st.v.enc_w2, lr, bc1, bc2);
  adam_tensor(params.enc_b2, g.enc_b2, st.m.enc_b2, st.v.enc_b2, lr, bc1, bc2);
  adam_tensor(params.query, g.query, st.m.query, st.v.query, lr, bc1, bc2);
  adam_tensor(params.head_w1, g.head_w1, st.m.head_w1, st.v.head_w1, lr, bc1, bc2);
  adam_tensor(params.head_b1, g.head_b1, st.m.head_b1, st.v.head_b1, lr, bc1, bc2);
  adam_tensor(params.head_w2, g.head_w2, st.m.head_w2, st.v.head_w2, lr, bc1, bc2);
  adam_scalar(params.head_b2, g.head_b2, st.m.head_b2, st.v.head_b2, lr, bc1, bc2);
  adam_scalar(params.alpha_raw, g.alpha_raw, st.m.alpha_raw, st.v.alpha_raw, lr, bc1, bc2);

  // Decoupled weight decay on alpha_raw only: without it the slip term,
  // which has no dependence on the network weights, would push alpha up
  // until every batch clamps to zero.
  params.alpha_raw -= lr * alpha_decay * params.alpha_raw;
  params.alpha_raw = std::min(params.alpha_raw, kAlphaRawMax);
}

FitResult fit(const std::vector<data::Sequence>& dataset, const TrainConfig& tc,
              const net::ModelConfig& mc, const std::filesystem::path& checkpoint_path) {
  if (dataset.empty()) throw std::invalid_argument("fit: empty dataset");
  tc.validate();

  FitResult result;
  result.params = net::ModelParams::init(mc);

  // The tokenizer is frozen, so tokens are computed once per sequence.
  std::vector<Eigen::MatrixXd> tokens;
  tokens.reserve(dataset.size());
  for (const auto& s : dataset) tokens.push_back(net::tokenize_image(s.image, result.params));

  AdamState adam = AdamState::zero(mc);
  try {
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
      const std::uint64_t epoch_seed =
          fnv1a64_u64(static_cast<std::uint64_t>(epoch), fnv1a64_u64(tc.seed));
      const auto batches =
          data::shuffle_batches(dataset.size(), tc.batch_size, epoch_seed);

      EpochStats stats;
      for (const auto& batch : batches) {
        std::vector<net::ForwardTrace> traces(batch.indices.size());
        std::vector<net::ForwardCache> caches(batch.indices.size());
        for (std::size_t i = 0; i < batch.indices.size(); ++i) {
          const auto& seq = dataset[batch.indices[i]];
          traces[i] = net::forward_from_tokens(tokens[batch.indices[i]], seq.proprio,
                                               seq.mean_slip, result.params, &caches[i]);
        }
        const auto k = static_cast<std::size_t>(std::ceil(
            tc.selection_fraction * static_cast<double>(batch.indices.size())));
        const auto selected = net::select(traces, std::max<std::size_t>(k, 1));

        std::vector<net::ForwardTrace> sel_traces;
        std::vector<net::ForwardCache> sel_caches;
        std::vector<BatchItem> sel_items;
        std::vector<double> sel_labels;
        for (std::size_t idx : selected) {
          const auto& seq = dataset[batch.indices[idx]];
          sel_traces.push_back(traces[idx]);
          sel_caches.push_back(caches[idx]);
          sel_items.push_back(BatchItem{&tokens[batch.indices[idx]], &seq.proprio,
                                        seq.v_applied, seq.mean_slip});
          sel_labels.push_back(seq.v_applied);
        }

        const LossBreakdown lb =
            compute_losses(sel_traces, sel_labels, result.params.alpha());
        const Gradients g = backward(sel_items, sel_traces, sel_caches, result.params, lb);
        adam_update(result.params, g, adam, tc.learning_rate, tc.alpha_decay);

        stats.velocity_loss += lb.velocity_loss;
        stats.slip_loss += lb.slip_loss;
        stats.total += lb.total;
      }
      const double nb = static_cast<double>(batches.size());
      stats.velocity_loss /= nb;
      stats.slip_loss /= nb;
      stats.total /= nb;
      stats.alpha = result.params.alpha();
      result.curve.push_back(stats);
      log::debug("epoch " + std::to_string(epoch) + " total " + std::to_string(stats.total));

      if (!checkpoint_path.empty() && (epoch + 1) % tc.checkpoint_interval == 0) {
        net::write_checkpoint(result.params, checkpoint_path);
        result.last_checkpoint = checkpoint_path;
      }
    }
  } catch (const std::exception& e) {
    std::string msg = std::string("training aborted: ") + e.what();
    if (!result.last_checkpoint.empty())
      msg += "; last good checkpoint: " + result.last_checkpoint.string();
    throw std::runtime_error(msg);
  }
  return result;
}

void write_curve_csv(const std::vector<EpochStats>& curve,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open curve csv: " + path.string());
  out << "epoch,velocity_loss,slip_loss,alpha,total\n";
  char buf[160];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%.9g,%.9g\n", i,
                  curve[i].velocity_loss, curve[i].slip_loss, curve[i].alpha,
                  curve[i].total);
    out << buf;
  }
}

}  // namespace panos::train

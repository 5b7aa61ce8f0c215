#include "panos/metrics/stability.hpp"

#include <cmath>
#include <stdexcept>

namespace panos::metrics {

std::vector<double> jerk_series(const std::vector<std::array<double, 3>>& accel,
                                double dt) {
  if (accel.size() < 3) throw std::invalid_argument("jerk_series: need >= 3 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("jerk_series: dt must be > 0");
  std::vector<double> out(accel.size() - 2);
  const double inv2dt = 1.0 / (2.0 * dt);
  for (std::size_t i = 1; i + 1 < accel.size(); ++i) {
    double mag2 = 0.0;
    for (int ax = 0; ax < 3; ++ax) {
      const double d = (accel[i + 1][ax] - accel[i - 1][ax]) * inv2dt;
      mag2 += d * d;
    }
    out[i - 1] = std::sqrt(mag2);
  }
  return out;
}

MeanJerk mean_jerk(const std::array<std::vector<std::array<double, 3>>, sim::kNumImus>& traces,
                   double dt) {
  const std::size_t len = traces[0].size();
  for (const auto& t : traces)
    if (t.size() != len) throw std::invalid_argument("mean_jerk: traces have unequal length");
  MeanJerk mj;
  for (int k = 0; k < sim::kNumImus; ++k) {
    const auto series = jerk_series(traces[k], dt);
    double sum = 0.0;
    for (double j : series) sum += j;
    mj.per_imu[k] = sum / static_cast<double>(series.size());
    mj.overall += mj.per_imu[k];
  }
  mj.overall /= sim::kNumImus;
  return mj;
}

double improvement_percent(double jerk_baseline, double jerk_panos) {
  if (!(jerk_baseline > 0.0))
    throw std::invalid_argument("improvement: baseline mean jerk must be > 0");
  return 100.0 * (jerk_baseline - jerk_panos) / jerk_baseline;
}

double vibration_cost_cm(const sim::RunLog& log) {
  if (log.steps.empty()) throw std::invalid_argument("vibration_cost: empty log");
  double sum_sq = 0.0;
  for (const auto& s : log.steps)
    for (double hip : s.proprio.hip_position) sum_sq += hip * hip;
  const double rms_rad =
      std::sqrt(sum_sq / (static_cast<double>(log.steps.size()) * sim::kNumFeet));
  return rms_rad * sim::kLegLength * 100.0;  // small-angle arc length, cm
}

std::vector<double> pca_explained_variance(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows(), d = rows.cols();
  if (n < d + 1)
    throw std::invalid_argument("pca: need at least cols+1 rows");
  Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("pca: eigen-decomposition failed");
  Eigen::VectorXd ev = solver.eigenvalues();  // ascending
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::max(ev[i], 0.0);
  const double total = ev.sum();
  std::vector<double> out(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i)
    out[static_cast<std::size_t>(i)] = total > 0.0 ? ev[d - 1 - i] / total : 0.0;
  return out;
}

Eigen::MatrixXd proprio_matrix(const std::vector<std::array<double, sim::kProprioDim>>& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), sim::kProprioDim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < sim::kProprioDim; ++j)
      m(static_cast<Eigen::Index>(i), j) = rows[i][j];
  return m;
}

StabilityReport stability_report(const sim::RunLog& log) {
  if (log.steps.empty()) throw std::invalid_argument("stability_report: empty log");
  std::array<std::vector<std::array<double, 3>>, sim::kNumImus> traces;
  for (auto& t : traces) t.reserve(log.steps.size());
  double cmd_sum = 0.0, ach_sum = 0.0;
  for (const auto& s : log.steps) {
    for (int k = 0; k < sim::kNumImus; ++k) traces[k].push_back(s.imu[k].accel);
    cmd_sum += s.commanded_velocity;
    ach_sum += s.achieved_velocity;
  }
  StabilityReport r;
  r.jerk = mean_jerk(traces, log.dt);
  r.vibration_cost_cm = vibration_cost_cm(log);
  r.mean_commanded = cmd_sum / static_cast<double>(log.steps.size());
  r.mean_achieved = ach_sum / static_cast<double>(log.steps.size());
  r.terrain = sim::terrain_class_name(log.terrain.terrain_class);
  r.payload_mass = log.payload_mass;
  r.seed = log.seed;
  return r;
}

}  // namespace panos::metrics

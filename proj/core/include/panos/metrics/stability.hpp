#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "panos/sim/world.hpp"

namespace panos::metrics {

/// Jerk magnitude series for one IMU: central finite differences of each
/// acceleration axis, then per-time Euclidean magnitude. Length = samples - 2.
std::vector<double> jerk_series(const std::vector<std::array<double, 3>>& accel,
                                double dt);

struct MeanJerk {
  std::array<double, sim::kNumImus> per_imu{};  // time-mean jerk, m/s^3
  double overall = 0.0;                         // unweighted mean of the 5
};

MeanJerk mean_jerk(const std::array<std::vector<std::array<double, 3>>, sim::kNumImus>& traces,
                   double dt);

/// 100 * (J_baseline - J_panos) / J_baseline. Throws on zero/negative baseline.
double improvement_percent(double jerk_baseline, double jerk_panos);

/// RMS deviation of the 4 hip angles from the standing pose (0 rad), averaged
/// over hips via pooled RMS, scaled by the nominal leg length, in cm.
double vibration_cost_cm(const sim::RunLog& log);

/// Explained-variance fractions: center columns, eigen-decompose the
/// covariance, normalize eigenvalues to sum 1, descending. Requires at least
/// cols+1 rows; zero eigenvalues (rank deficiency) are allowed.
std::vector<double> pca_explained_variance(const Eigen::MatrixXd& rows);

/// Window-averaged proprio rows of a sequence dataset, for pca reports.
Eigen::MatrixXd proprio_matrix(const std::vector<std::array<double, sim::kProprioDim>>& rows);

struct StabilityReport {
  MeanJerk jerk;
  double vibration_cost_cm = 0.0;
  double mean_commanded = 0.0;  // m/s
  double mean_achieved = 0.0;   // m/s
  std::string terrain;
  double payload_mass = 0.0;
  std::uint64_t seed = 0;
};

StabilityReport stability_report(const sim::RunLog& log);

}  // namespace panos::metrics

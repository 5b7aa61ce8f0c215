#include <doctest.h>

#include <stdexcept>

#include <Eigen/SVD>
#include <cmath>

#include "panos/metrics/stability.hpp"
#include "panos/rng.hpp"
#include "panos/sim/terrain.hpp"
#include "panos/sim/world.hpp"

using namespace panos;

namespace {

std::array<std::vector<std::array<double, 3>>, sim::kNumImus> imu_traces(
    const sim::RunLog& log) {
  std::array<std::vector<std::array<double, 3>>, sim::kNumImus> out;
  for (const auto& s : log.steps)
    for (int k = 0; k < sim::kNumImus; ++k) out[k].push_back(s.imu[k].accel);
  return out;
}

}  // namespace

TEST_CASE("jerk of a linear acceleration ramp is the exact slope") {
  // a(t) = (3t, -2t, 0.5t): central differences recover the slope exactly, so
  // every jerk magnitude is |(3,-2,0.5)|.
  const double dt = 0.01;
  std::vector<std::array<double, 3>> accel;
  for (int i = 0; i < 500; ++i) {
    const double t = i * dt;
    accel.push_back({3.0 * t, -2.0 * t, 0.5 * t});
  }
  const auto jerk = metrics::jerk_series(accel, dt);
  REQUIRE(jerk.size() == accel.size() - 2);
  const double expect = std::sqrt(3.0 * 3.0 + 2.0 * 2.0 + 0.5 * 0.5);
  for (double j : jerk) REQUIRE(j == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("jerk of a sinusoid matches the analytic derivative at interior points") {
  // a_x(t) = A sin(w t) => jerk_x = A w cos(w t); the central difference has
  // an O(dt^2) error with a known sinc factor, so compare against the exact
  // discrete formula A*sin(w*dt)/dt * cos(w t).
  const double dt = 0.01, A = 2.0, w = 7.0;
  std::vector<std::array<double, 3>> accel;
  for (int i = 0; i < 1000; ++i) accel.push_back({A * std::sin(w * i * dt), 0.0, 0.0});
  const auto jerk = metrics::jerk_series(accel, dt);
  const double gain = A * std::sin(w * dt) / dt;
  for (std::size_t i = 0; i < jerk.size(); ++i) {
    const double t = (i + 1) * dt;
    REQUIRE(jerk[i] == doctest::Approx(std::abs(gain * std::cos(w * t))).epsilon(1e-9));
  }
}

TEST_CASE("jerk_series matches a brute-force recomputation on simulator output") {
  const auto terrain = sim::make_terrain(sim::TerrainClass::Gravel, 3);
  const auto log = sim::rollout(terrain, [](double) { return 2.0; }, 6.8, 5.0, 3);
  const auto traces = imu_traces(log);
  for (int k = 0; k < sim::kNumImus; ++k) {
    const auto jerk = metrics::jerk_series(traces[k], log.dt);
    REQUIRE(jerk.size() == traces[k].size() - 2);
    for (std::size_t i = 0; i < jerk.size(); ++i) {
      double sq = 0.0;
      for (int ax = 0; ax < 3; ++ax) {
        const double d =
            (traces[k][i + 2][ax] - traces[k][i][ax]) / (2.0 * log.dt);
        sq += d * d;
      }
      REQUIRE(jerk[i] == doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
    }
  }
}

TEST_CASE("jerk_series needs at least three samples") {
  CHECK_THROWS_AS(metrics::jerk_series({{0, 0, 0}, {1, 1, 1}}, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(metrics::jerk_series({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("mean_jerk averages per-IMU time means with equal weight") {
  const auto terrain = sim::make_terrain(sim::TerrainClass::Grass, 5);
  const auto log = sim::rollout(terrain, [](double) { return 1.5; }, 1.0, 4.0, 5);
  const auto traces = imu_traces(log);
  const auto mj = metrics::mean_jerk(traces, log.dt);
  double acc = 0.0;
  for (int k = 0; k < sim::kNumImus; ++k) {
    const auto series = metrics::jerk_series(traces[k], log.dt);
    double m = 0.0;
    for (double j : series) m += j;
    m /= static_cast<double>(series.size());
    REQUIRE(mj.per_imu[k] == doctest::Approx(m).epsilon(1e-12));
    acc += m;
  }
  CHECK(mj.overall == doctest::Approx(acc / sim::kNumImus).epsilon(1e-12));
}

TEST_CASE("improvement_percent reproduces fixed reference pairs") {
  // Regression constants: jerk pairs with known percentage reductions.
  auto round2 = [](double x) { return std::round(x * 100.0) / 100.0; };
  CHECK(round2(metrics::improvement_percent(546.95, 386.44)) == doctest::Approx(29.35));
  CHECK(round2(metrics::improvement_percent(836.44, 365.17)) == doctest::Approx(56.34));
  CHECK(metrics::improvement_percent(100.0, 100.0) == 0.0);
  CHECK(metrics::improvement_percent(100.0, 120.0) == doctest::Approx(-20.0));
  CHECK_THROWS_AS(metrics::improvement_percent(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(metrics::improvement_percent(-5.0, 1.0), std::invalid_argument);
}

TEST_CASE("vibration_cost_cm equals pooled hip RMS x leg length, in cm") {
  sim::RunLog log;
  log.dt = sim::kDt;
  // Two steps with known hip angles.
  sim::StepRecord a, b;
  a.proprio.hip_position = {0.01, -0.02, 0.03, 0.0};
  b.proprio.hip_position = {-0.01, 0.02, 0.0, 0.04};
  log.steps = {a, b};
  double sq = 0.0;
  for (const auto& s : log.steps)
    for (double h : s.proprio.hip_position) sq += h * h;
  const double rms = std::sqrt(sq / (2.0 * sim::kNumFeet));
  CHECK(metrics::vibration_cost_cm(log) ==
        doctest::Approx(rms * sim::kLegLength * 100.0).epsilon(1e-12));

  sim::RunLog empty;
  CHECK_THROWS_AS(metrics::vibration_cost_cm(empty), std::invalid_argument);
}

TEST_CASE("pca_explained_variance matches an SVD oracle on random data") {
  Rng rng(41);
  const int n = 200, d = 12;
  Eigen::MatrixXd rows(n, d);
  // Correlated columns so the spectrum is nontrivial.
  Eigen::MatrixXd mix(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) mix(i, j) = rng.gaussian() / std::sqrt(d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) rows(i, j) = rng.gaussian();
  rows = rows * mix;

  const auto frac = metrics::pca_explained_variance(rows);
  REQUIRE(frac.size() == static_cast<std::size_t>(d));
  double sum = 0.0;
  for (std::size_t i = 0; i < frac.size(); ++i) {
    CHECK(frac[i] >= 0.0);
    if (i > 0) CHECK(frac[i] <= frac[i - 1] + 1e-12);
    sum += frac[i];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  // Independent oracle: singular values of the centered matrix.
  Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  Eigen::VectorXd sv = svd.singularValues();
  const double total = sv.array().square().sum();
  for (int i = 0; i < d; ++i)
    REQUIRE(frac[i] == doctest::Approx(sv[i] * sv[i] / total).epsilon(1e-8));
}

TEST_CASE("pca: a rank-one matrix concentrates all variance in component 1") {
  Rng rng(43);
  Eigen::VectorXd dir(8);
  for (int i = 0; i < 8; ++i) dir[i] = rng.gaussian();
  Eigen::MatrixXd rows(50, 8);
  for (int i = 0; i < 50; ++i) rows.row(i) = rng.gaussian() * dir.transpose();
  const auto frac = metrics::pca_explained_variance(rows);
  CHECK(frac[0] == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 1; i < frac.size(); ++i) CHECK(frac[i] < 1e-9);
}

TEST_CASE("pca requires more rows than columns") {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Random(8, 8);
  CHECK_THROWS_AS(metrics::pca_explained_variance(rows), std::invalid_argument);
}

TEST_CASE("proprio_matrix lays rows out in dataset order") {
  std::vector<std::array<double, sim::kProprioDim>> rows(3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < sim::kProprioDim; ++c) rows[r][c] = r * 100.0 + c;
  const auto m = metrics::proprio_matrix(rows);
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == sim::kProprioDim);
  CHECK(m(1, 7) == 107.0);
  CHECK(m(2, 59) == 259.0);
}

TEST_CASE("stability_report aggregates the underlying metrics") {
  auto terrain = sim::make_terrain(sim::TerrainClass::PebbleSidewalk, 47);
  auto log = sim::rollout(terrain, [](double) { return 1.8; }, 6.8, 6.0, 47);
  log.payload_mass = 6.8;
  const auto rep = metrics::stability_report(log);
  const auto mj = metrics::mean_jerk(imu_traces(log), log.dt);
  CHECK(rep.jerk.overall == doctest::Approx(mj.overall).epsilon(1e-12));
  CHECK(rep.vibration_cost_cm ==
        doctest::Approx(metrics::vibration_cost_cm(log)).epsilon(1e-12));
  CHECK(rep.mean_commanded == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(rep.mean_achieved < rep.mean_commanded);
  CHECK(rep.mean_achieved > 0.0);
  CHECK(rep.payload_mass == 6.8);
}

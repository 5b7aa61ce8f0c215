#include <benchmark/benchmark.h>

#include "panos/data/sequence.hpp"
#include "panos/metrics/stability.hpp"
#include "panos/net/model.hpp"
#include "panos/sim/terrain.hpp"
#include "panos/sim/world.hpp"
#include "panos/train/trainer.hpp"

using namespace panos;

namespace {

void BM_SimStep(benchmark::State& state) {
  sim::Simulator s(sim::make_terrain(sim::TerrainClass::Gravel, 1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(s.step(1.5, 6.8, sim::kDt));
}
BENCHMARK(BM_SimStep);

void BM_RenderObservation(benchmark::State& state) {
  const auto terrain = sim::make_terrain(sim::TerrainClass::Grass, 2);
  double pos = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::render_observation(terrain, pos));
    pos += 0.1;
  }
}
BENCHMARK(BM_RenderObservation);

void BM_TokenizeImage(benchmark::State& state) {
  const auto params = net::ModelParams::init({});
  const auto terrain = sim::make_terrain(sim::TerrainClass::Gravel, 3);
  const auto img = sim::render_observation(terrain, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(net::tokenize_image(img, params));
}
BENCHMARK(BM_TokenizeImage);

std::vector<data::Sequence> bench_sequences() {
  const auto terrain = sim::make_terrain(sim::TerrainClass::Gravel, 4);
  const auto profile = sim::random_velocity_profile(0.3, 2.5, 5.0, 4);
  return data::form_sequences(sim::rollout(terrain, profile, 6.8, 20.0, 4), 1.0);
}

void BM_Forward(benchmark::State& state) {
  const auto params = net::ModelParams::init({});
  const auto seqs = bench_sequences();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(net::forward(seqs[i % seqs.size()], params));
    ++i;
  }
}
BENCHMARK(BM_Forward);

void BM_ForwardFromCachedTokens(benchmark::State& state) {
  const auto params = net::ModelParams::init({});
  const auto seqs = bench_sequences();
  std::vector<Eigen::MatrixXd> tokens;
  for (const auto& s : seqs) tokens.push_back(net::tokenize_image(s.image, params));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& s = seqs[i % seqs.size()];
    benchmark::DoNotOptimize(net::forward_from_tokens(tokens[i % seqs.size()], s.proprio,
                                                      s.mean_slip, params));
    ++i;
  }
}
BENCHMARK(BM_ForwardFromCachedTokens);

void BM_TrainEpoch(benchmark::State& state) {
  const auto seqs = bench_sequences();
  train::TrainConfig tc;
  tc.epochs = 1;
  tc.batch_size = 16;
  const net::ModelConfig mc;
  for (auto _ : state) benchmark::DoNotOptimize(train::fit(seqs, tc, mc));
}
BENCHMARK(BM_TrainEpoch);

void BM_JerkSeries(benchmark::State& state) {
  const auto terrain = sim::make_terrain(sim::TerrainClass::Gravel, 5);
  const auto log = sim::rollout(terrain, [](double) { return 2.0; }, 6.8, 10.0, 5);
  std::vector<std::array<double, 3>> accel;
  for (const auto& s : log.steps) accel.push_back(s.imu[0].accel);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::jerk_series(accel, log.dt));
}
BENCHMARK(BM_JerkSeries);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "skewgp/joint_sampler.hpp"
#include "skewgp/monte_carlo.hpp"
#include "skewgp/validation.hpp"

using namespace skewgp;

namespace {

const RadialKernel kSE = RadialKernel::squared_exponential(1.0);

JointGram gram_fixture() {
  std::vector<PairedPoint> pts;
  for (int i = 0; i < 4; ++i) {
    pts.emplace_back(Vector::LinSpaced(3, -1.0 + 0.3 * i, 1.0), Vector::LinSpaced(3, 0.5, -0.2 * i));
  }
  return build_joint_gram(kSE, ExpansionPoint::origin(3), pts);
}

void BM_SampleJointSerial(benchmark::State& state) {
  const JointGram g = gram_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(reference::sample_joint(g, 1, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleJointParallel(benchmark::State& state) {
  const JointGram g = gram_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(sample_joint(g, 1, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void moments_row(std::uint64_t row, Eigen::Ref<Vector> out) {
  Engine e = stream_for(3, row);
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = standard_normal(e);
}

void BM_MomentsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::accumulate_moments(state.range(0), 12, moments_row));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MomentsParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(accumulate_moments(state.range(0), 12, moments_row));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

const BoundConfig kBound{0.95, 0.95, {0.05}, 2, std::nullopt};

void BM_BoundValidationSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::run_bound_validation(kSE, kBound, ExpansionPoint::origin(2), state.range(0), 5));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BoundValidationParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_bound_validation(kSE, kBound, ExpansionPoint::origin(2), state.range(0), 5));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SampleJointSerial)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleJointParallel)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsParallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundValidationSerial)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundValidationParallel)->Arg(20000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "nhj/expmap.hpp"
#include "nhj/geometry.hpp"
#include "nhj/maupertuis.hpp"
#include "nhj/systems.hpp"

namespace {

using namespace nhj;

void BM_VerifyMaupertuis(benchmark::State& state) {
  const SystemDefinition s = builtin("disk-harmonic").definition;
  const Vec q = Eigen::Vector4d(0, 0, 0, 0.2);
  const Vec v = frame_at(s, q) * Eigen::Vector2d(0.6, 0.4);
  VerifyOptions o;
  o.integrator.step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_maupertuis(s, 1.0, q, v, 1.0, o));
}
BENCHMARK(BM_VerifyMaupertuis)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ExpGrid(benchmark::State& state) {
  const SystemDefinition s = builtin("disk-free").definition;
  const Vec q = Vec::Zero(4);
  ExpOptions o;
  o.integrator.step = 1e-2;
  const auto dirs = planar_unit_directions(s, q, 16);
  for (auto _ : state) benchmark::DoNotOptimize(exp_grid(s, q, o, dirs, {0.25, 0.5, 1.0}));
}
BENCHMARK(BM_ExpGrid)->Unit(benchmark::kMillisecond);

}  // namespace

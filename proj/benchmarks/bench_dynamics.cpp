#include <benchmark/benchmark.h>

#include "nhj/dynamics.hpp"
#include "nhj/geometry.hpp"
#include "nhj/integrate.hpp"
#include "nhj/systems.hpp"

namespace {

using namespace nhj;

const char* const kNames[] = {"particle-r3-linear", "disk-harmonic", "disk-linear", "disk-free"};

AdaptedState start(const SystemDefinition& s) {
  const Vec q = s.n == 3 ? Vec(Eigen::Vector3d(0.1, 0.2, -0.3)) : Vec(Eigen::Vector4d(0, 0, 0, 0.2));
  return {0.0, q, momenta_from_velocity(s, q, frame_at(s, q) * Eigen::Vector2d(0.6, 0.4))};
}

void BM_MechanicalField(benchmark::State& state) {
  const SystemDefinition s = builtin(kNames[state.range(0)]).definition;
  const AdaptedState st = start(s);
  for (auto _ : state) benchmark::DoNotOptimize(mechanical_field(s, st));
  state.SetLabel(s.name);
}
BENCHMARK(BM_MechanicalField)->DenseRange(0, 3);

void BM_JacobiField(benchmark::State& state) {
  const SystemDefinition s = builtin(kNames[state.range(0)]).definition;
  const AdaptedState st = start(s);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_field(s, 2.0, st));
  state.SetLabel(s.name);
}
BENCHMARK(BM_JacobiField)->DenseRange(0, 3);

void BM_StructureFunctions(benchmark::State& state) {
  const SystemDefinition s = builtin(kNames[state.range(0)]).definition;
  const Vec q = start(s).q;
  for (auto _ : state) benchmark::DoNotOptimize(structure_functions_at(s, q));
  state.SetLabel(s.name);
}
BENCHMARK(BM_StructureFunctions)->DenseRange(0, 3);

// One unit of time at the default step.
void BM_Rk4Trajectory(benchmark::State& state) {
  const SystemDefinition s = builtin(kNames[state.range(0)]).definition;
  const AdaptedState st = start(s);
  IntegratorOptions o;
  o.step = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_mechanical(s, st, 1.0, o));
  state.SetLabel(s.name);
}
BENCHMARK(BM_Rk4Trajectory)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Rkf45Trajectory(benchmark::State& state) {
  const SystemDefinition s = builtin(kNames[state.range(0)]).definition;
  const AdaptedState st = start(s);
  IntegratorOptions o;
  o.method = Method::rkf45;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_mechanical(s, st, 1.0, o));
  state.SetLabel(s.name);
}
BENCHMARK(BM_Rkf45Trajectory)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

#include <benchmark/benchmark.h>

#include "qms/classical.hpp"
#include "qms/nqueens.hpp"
#include "qms/qwalk.hpp"

namespace {

void BM_WalkStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = qms::nqueens::generate_instance(n);
  const auto layout = qms::qwalk::layout(inst.spec);
  qms::qwalk::WalkOperators ops(inst.spec, layout);
  ops.set_delta(qms::build_delta_table(inst.spec, 1.0));
  auto sv = qms::qwalk::initialize(inst.spec, layout, qms::InitialState::uniform());
  for (auto _ : state) {
    qms::qwalk::walk_step(sv, ops, qms::qwalk::Ordering::lemieux);
    benchmark::DoNotOptimize(sv.amplitudes().data());
  }
  state.counters["qubits"] = layout.total();
}
BENCHMARK(BM_WalkStep)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_QuantumCurve(benchmark::State& state) {
  const auto inst = qms::nqueens::generate_instance(4);
  qms::Schedule s;
  s.steps = 50;
  const qms::DeltaSchedule deltas(inst.spec, s);
  for (auto _ : state) {
    auto p = qms::qwalk::success_curve(inst.spec, deltas, qms::qwalk::Ordering::lemieux,
                                       qms::InitialState::uniform(), 50);
    benchmark::DoNotOptimize(p.data());
  }
}
BENCHMARK(BM_QuantumCurve)->Unit(benchmark::kMillisecond);

void BM_ClassicalEvolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = qms::nqueens::generate_instance(n);
  const auto P = qms::classical::transition_matrix(inst.spec, 1.0);
  const qms::classical::Distribution pi0(inst.spec.size(), 1.0 / static_cast<double>(inst.spec.size()));
  for (auto _ : state) {
    auto p = qms::classical::evolve(P, pi0, 100);
    benchmark::DoNotOptimize(p.data());
  }
}
BENCHMARK(BM_ClassicalEvolve)->Arg(5)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Heuristic(benchmark::State& state) {
  qms::nqueens::Board b{{0, 4, 7, 5, 2, 6, 1, 3}};
  for (auto _ : state) benchmark::DoNotOptimize(qms::nqueens::heuristic(b));
}
BENCHMARK(BM_Heuristic);

}  // namespace

BENCHMARK_MAIN();

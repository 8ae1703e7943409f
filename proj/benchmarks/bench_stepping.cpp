#include <benchmark/benchmark.h>

#include "delam/simulation.hpp"

using namespace delam;

namespace {

void BM_SliderRun(benchmark::State& state) {
  const ProblemSetup p = slider_problem(70e9, 0.1, 0.0125, 150e9, 150e9, 375.0, 267e-6, 0.375);
  const double tau = 0.375 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(p, 6.25e-3, tau).norms.l1);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SliderRun)->Arg(800)->Arg(6400)->Unit(benchmark::kMillisecond);

void BM_HorizontalExperiment(benchmark::State& state) {
  ProblemSetup p;
  const int nx = static_cast<int>(state.range(0));
  p.mesh = build_rect_mesh(0.25, 0.025, 0.225, nx, nx / 10, MeshLayout::Exp2D);
  p.material.young = 70e9;
  p.material.poisson = 0.35;
  p.adhesive = AdhesiveLaw::uniform(p.mesh.num_contact_edges(), 150e9, 75e9, 187.5);
  p.load.dirichlet_velocity = Vec2(333.3e-6, 0.0);
  p.load.horizon = 1.5;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(p, 0.01, 5e-3).norms.l1);
  state.SetItemsProcessed(state.iterations() * 300);
}
BENCHMARK(BM_HorizontalExperiment)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

#include <benchmark/benchmark.h>

#include "delam/elastostatics.hpp"

using namespace delam;

namespace {

Mesh2D specimen(int nx) { return build_rect_mesh(0.25, 0.025, 0.225, nx, nx / 10, MeshLayout::Exp2D); }

MaterialKV material() {
  MaterialKV m;
  m.young = 70e9;
  m.poisson = 0.35;
  return m;
}

void BM_AssembleStiffness(benchmark::State& state) {
  const Mesh2D m = specimen(static_cast<int>(state.range(0)));
  const MaterialKV mat = material();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(m, mat));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.num_triangles()));
}
BENCHMARK(BM_AssembleStiffness)->Arg(50)->Arg(100)->Arg(200);

void BM_AssembleAdhesive(benchmark::State& state) {
  const Mesh2D m = specimen(static_cast<int>(state.range(0)));
  const AdhesiveLaw law = AdhesiveLaw::uniform(m.num_contact_edges(), 150e9, 75e9, 187.5);
  const Eigen::VectorXd z = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m.num_contact_edges()));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_adhesive(m, law, z));
}
BENCHMARK(BM_AssembleAdhesive)->Arg(100)->Arg(400);

}  // namespace

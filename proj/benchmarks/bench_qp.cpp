#include <benchmark/benchmark.h>

#include "delam/stepper.hpp"

using namespace delam;

namespace {

struct Compressed {
  Mesh2D mesh;
  MaterialKV material;
  AdhesiveLaw adhesive;
  LoadProgram load;
};

// Debonded specimen pushed onto the obstacle, so the QP has a nontrivial active set.
Compressed compressed(int nx) {
  Compressed c;
  c.mesh = build_rect_mesh(0.25, 0.025, 0.225, nx, nx / 10, MeshLayout::Exp2D);
  c.material.young = 70e9;
  c.material.poisson = 0.35;
  c.adhesive = AdhesiveLaw::uniform(c.mesh.num_contact_edges(), 150e9, 75e9, 187.5);
  c.load.dirichlet_velocity = Vec2(0.0, -333.3e-6);
  c.load.horizon = 1.0;
  return c;
}

void BM_QpColdSolve(benchmark::State& state) {
  const Compressed c = compressed(static_cast<int>(state.range(0)));
  Stepper s(c.mesh, c.material, c.adhesive, c.load);
  SimState st = SimState::initial(c.mesh);
  st.z.setZero();
  s.u_step(st, 0.01, 0.01, 0.01);
  QpProblem qp = s.last_problem();
  qp.hessian_version = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_qp(qp));
}
BENCHMARK(BM_QpColdSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_QpWarmCachedSolve(benchmark::State& state) {
  const Compressed c = compressed(static_cast<int>(state.range(0)));
  Stepper s(c.mesh, c.material, c.adhesive, c.load);
  SimState st = SimState::initial(c.mesh);
  st.z.setZero();
  s.u_step(st, 0.01, 0.01, 0.01);
  const QpProblem qp = s.last_problem();
  const std::vector<int> warm = s.last_result().active;
  QpSolver solver;
  solver.solve(qp, {}, warm);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(qp, {}, warm));
}
BENCHMARK(BM_QpWarmCachedSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace

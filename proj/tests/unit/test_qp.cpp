#include <gtest/gtest.h>

#include <random>

#include <Eigen/Dense>

#include "delam/error.hpp"
#include "delam/qp.hpp"

using namespace delam;

namespace {

struct Brute {
  Eigen::VectorXd x;
  bool found = false;
};

// Enumerates every active set and returns the one satisfying the KKT conditions.
Brute brute_force(const Eigen::MatrixXd& h, const Eigen::VectorXd& c, const std::vector<int>& bounds) {
  const int m = static_cast<int>(bounds.size());
  const auto n = h.rows();
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<bool> fixed(static_cast<std::size_t>(n), false);
    for (int b = 0; b < m; ++b) {
      if (mask & (1 << b)) fixed[bounds[b]] = true;
    }
    std::vector<int> freeidx;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!fixed[static_cast<std::size_t>(i)]) freeidx.push_back(static_cast<int>(i));
    }
    Eigen::MatrixXd hf(freeidx.size(), freeidx.size());
    Eigen::VectorXd cf(freeidx.size());
    for (std::size_t a = 0; a < freeidx.size(); ++a) {
      cf[a] = c[freeidx[a]];
      for (std::size_t b = 0; b < freeidx.size(); ++b) hf(a, b) = h(freeidx[a], freeidx[b]);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (!freeidx.empty()) {
      const Eigen::VectorXd xf = hf.ldlt().solve(-cf);
      for (std::size_t a = 0; a < freeidx.size(); ++a) x[freeidx[a]] = xf[a];
    }
    const Eigen::VectorXd g = h * x + c;
    bool ok = true;
    for (int b = 0; b < m; ++b) {
      const int i = bounds[b];
      if (fixed[i] ? g[i] < -1e-12 : x[i] < -1e-12) ok = false;
    }
    if (ok) return {x, true};
  }
  return {};
}

struct Random {
  Eigen::MatrixXd h;
  QpProblem qp;
};

Random random_problem(std::mt19937& rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
  }
  Random r;
  r.h = a.transpose() * a + 0.1 * Eigen::MatrixXd::Identity(n, n);
  r.qp.hessian = r.h.sparseView();
  r.qp.linear.resize(n);
  for (int i = 0; i < n; ++i) r.qp.linear[i] = nd(rng);
  std::bernoulli_distribution coin(0.6);
  for (int i = 0; i < n; ++i) {
    if (coin(rng)) r.qp.bound_dofs.push_back(i);
  }
  r.qp.rotation = Eigen::MatrixXd::Identity(n, n).sparseView();
  return r;
}

}  // namespace

TEST(Qp, MatchesActiveSetEnumeration) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 7;
    const Random r = random_problem(rng, n);
    const Brute ref = brute_force(r.h, r.qp.linear, r.qp.bound_dofs);
    ASSERT_TRUE(ref.found);
    const QpResult res = solve_qp(r.qp);
    EXPECT_LE((res.x - ref.x).lpNorm<Eigen::Infinity>(), 1e-9 * (1.0 + ref.x.lpNorm<Eigen::Infinity>()))
        << "trial " << trial;
    EXPECT_LE(res.kkt.stationarity, 1e-9);
    EXPECT_LE(res.kkt.primal_violation, 1e-12);
    EXPECT_LE(res.kkt.dual_violation, 1e-12);
    EXPECT_LE(res.kkt.complementarity, 1e-12);
  }
}

TEST(Qp, VariationalInequalityOnRandomFeasibleDirections) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Random r = random_problem(rng, 6);
    const QpResult res = solve_qp(r.qp);
    const Eigen::VectorXd g = r.h * res.x + r.qp.linear;
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd y(6);
      for (int i = 0; i < 6; ++i) y[i] = 3.0 * ud(rng);
      for (int i : r.qp.bound_dofs) y[i] = std::abs(y[i]);
      EXPECT_GE(g.dot(y - res.x), -1e-10 * (1.0 + g.norm() * (y - res.x).norm()));
    }
  }
}

TEST(Qp, WarmStartFromSolutionTakesOneIteration) {
  std::mt19937 rng(7);
  const Random r = random_problem(rng, 8);
  const QpResult cold = solve_qp(r.qp);
  const QpResult warm = solve_qp(r.qp, {}, cold.active);
  EXPECT_EQ(warm.iterations, 1);
  EXPECT_LE((warm.x - cold.x).norm(), 1e-12 * (1.0 + cold.x.norm()));
  std::vector<int> wrong = r.qp.bound_dofs;  // everything active
  const QpResult from_wrong = solve_qp(r.qp, {}, wrong);
  EXPECT_LE((from_wrong.x - cold.x).norm(), 1e-9 * (1.0 + cold.x.norm()));
}

TEST(Qp, FactorizationReusedForSameVersionAndActiveSet) {
  std::mt19937 rng(11);
  Random r = random_problem(rng, 5);
  r.qp.hessian_version = 42;
  QpSolver solver;
  const QpResult a = solver.solve(r.qp);
  const int f = solver.factorizations();
  const QpResult b = solver.solve(r.qp, {}, a.active);
  EXPECT_EQ(solver.factorizations(), f);
  EXPECT_EQ(a.x, b.x);
  r.qp.hessian_version = 0;  // disables reuse
  solver.solve(r.qp, {}, a.active);
  EXPECT_EQ(solver.factorizations(), f + 1);
}

TEST(Qp, ChangeCapRaises) {
  const int n = 6;
  QpProblem qp;
  qp.hessian = Eigen::MatrixXd::Identity(n, n).sparseView();
  qp.linear = Eigen::VectorXd::Ones(n);  // unconstrained minimizer -1 everywhere
  for (int i = 0; i < n; ++i) qp.bound_dofs.push_back(i);
  QpOptions opt;
  opt.max_changes = 0;
  EXPECT_THROW(solve_qp(qp, opt), NumericalError);
  opt.max_changes = 1;
  const QpResult res = solve_qp(qp, opt);
  EXPECT_EQ(res.changes, 1);
  EXPECT_EQ(res.x, Eigen::VectorXd::Zero(n));
  EXPECT_EQ(res.multipliers, Eigen::VectorXd::Ones(n));
}

TEST(Qp, IndefiniteHessianRaises) {
  QpProblem qp;
  qp.hessian = (-Eigen::MatrixXd::Identity(3, 3)).sparseView();
  qp.linear = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(solve_qp(qp), NumericalError);
}

TEST(Qp, SizeMismatchRejected) {
  QpProblem qp;
  qp.hessian = Eigen::MatrixXd::Identity(3, 3).sparseView();
  qp.linear = Eigen::VectorXd::Ones(2);
  EXPECT_THROW(solve_qp(qp), std::invalid_argument);
  qp.linear = Eigen::VectorXd::Ones(3);
  qp.bound_dofs = {5};
  EXPECT_THROW(solve_qp(qp), std::invalid_argument);
}

TEST(ContactFrame, OrthogonalAndBoundIsOpening) {
  const Mesh2D m = build_rect_mesh(0.25, 0.025, 0.225, 10, 2, MeshLayout::Exp2D);
  const DofMap dofs = DofMap::build(m);
  const ContactFrame f = build_contact_frame(m, dofs);
  const Eigen::MatrixXd q(f.rotation);
  EXPECT_LE((q.transpose() * q - Eigen::MatrixXd::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(f.bound_dofs.size(), m.contact_nodes().size());
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(q.rows(), 0.1, 1.0);
  const Eigen::VectorXd uf = q * x;
  const Eigen::VectorXd u = expand_free(dofs, uf, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.num_dofs())));
  for (int v : m.contact_nodes()) {
    const int b = dofs.free_index[2 * static_cast<std::size_t>(v)];
    EXPECT_NEAR(opening(nodal(u, v), Vec2(0, -1)), x[b], 1e-15);
  }
}

#include "delam/qp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "delam/error.hpp"

namespace delam {

using Triplet = Eigen::Triplet<double>;

ContactFrame build_contact_frame(const Mesh2D& mesh, const DofMap& dofs) {
  const auto nf = static_cast<Eigen::Index>(dofs.free.size());
  std::vector<Vec2> node_normal(mesh.num_nodes(), Vec2::Zero());
  std::vector<bool> is_contact(mesh.num_nodes(), false);
  for (std::size_t c = 0; c < mesh.num_contact_edges(); ++c) {
    const Vec2& n = mesh.contact_normal(c);
    for (int v : mesh.contact_edge(c).nodes) {
      if (is_contact[v] && (node_normal[v] - n).norm() > 1e-12) {
        throw MeshError(fmt::format("contact node {} has conflicting normals; only flat contact "
                                    "boundaries are supported",
                                    v));
      }
      is_contact[v] = true;
      node_normal[v] = n;
    }
  }

  ContactFrame frame;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(nf) + 2 * mesh.num_nodes());
  std::vector<bool> done(static_cast<std::size_t>(nf), false);
  for (std::size_t v = 0; v < mesh.num_nodes(); ++v) {
    if (!is_contact[v]) continue;
    const int fx = dofs.free_index[2 * v];
    const int fy = dofs.free_index[2 * v + 1];
    if (fx < 0 || fy < 0) throw MeshError(fmt::format("contact node {} is constrained", v));
    const Vec2 n = node_normal[v];
    const Vec2 t(-n.y(), n.x());
    // u = -x_n n + x_t t
    trips.emplace_back(fx, fx, -n.x());
    trips.emplace_back(fy, fx, -n.y());
    trips.emplace_back(fx, fy, t.x());
    trips.emplace_back(fy, fy, t.y());
    done[fx] = done[fy] = true;
    frame.bound_dofs.push_back(fx);
  }
  for (Eigen::Index i = 0; i < nf; ++i) {
    if (!done[static_cast<std::size_t>(i)]) trips.emplace_back(i, i, 1.0);
  }
  frame.rotation.resize(nf, nf);
  frame.rotation.setFromTriplets(trips.begin(), trips.end());
  frame.rotation.prune(0.0);
  std::sort(frame.bound_dofs.begin(), frame.bound_dofs.end());
  return frame;
}

QpProblem rotate_contact_dofs(const ContactFrame& frame, const ReducedSystem& system) {
  QpProblem qp;
  const SparseMatrix rt = frame.rotation.transpose();
  qp.hessian = rt * system.matrix * frame.rotation;
  qp.linear = -(rt * system.rhs);
  qp.bound_dofs = frame.bound_dofs;
  qp.rotation = frame.rotation;
  return qp;
}

QpProblem rotate_contact_dofs(const Mesh2D& mesh, const DofMap& dofs, const ReducedSystem& system) {
  return rotate_contact_dofs(build_contact_frame(mesh, dofs), system);
}

KktDiagnostics kkt_diagnostics(const QpProblem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& multipliers) {
  KktDiagnostics k;
  const Eigen::VectorXd g = problem.hessian * x + problem.linear - multipliers;
  k.stationarity = g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0;
  for (int i : problem.bound_dofs) {
    k.primal_violation = std::max(k.primal_violation, -x[i]);
    k.dual_violation = std::max(k.dual_violation, -multipliers[i]);
    k.complementarity = std::max(k.complementarity, std::abs(multipliers[i] * x[i]));
  }
  return k;
}

// ---------------------------------------------------------------------------

struct QpSolver::Cache {
  std::uint64_t version = 0;
  std::vector<char> active;
  std::vector<int> inactive;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool valid = false;
  int factorizations = 0;
};

QpSolver::QpSolver() : cache_(std::make_unique<Cache>()) {}
QpSolver::~QpSolver() = default;
QpSolver::QpSolver(QpSolver&&) noexcept = default;
QpSolver& QpSolver::operator=(QpSolver&&) noexcept = default;

int QpSolver::factorizations() const { return cache_->factorizations; }

namespace {

SparseMatrix principal_submatrix(const SparseMatrix& h, const std::vector<int>& idx) {
  std::vector<int> pos(static_cast<std::size_t>(h.rows()), -1);
  for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<int>(k);
  std::vector<Triplet> trips;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    for (SparseMatrix::InnerIterator it(h, idx[k]); it; ++it) {
      const int r = pos[static_cast<std::size_t>(it.row())];
      if (r >= 0) trips.emplace_back(r, static_cast<int>(k), it.value());
    }
  }
  const auto m = static_cast<Eigen::Index>(idx.size());
  SparseMatrix sub(m, m);
  sub.setFromTriplets(trips.begin(), trips.end());
  return sub;
}

struct Thresholds {
  double x;
  double lambda;
};

Thresholds thresholds(const QpProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& g, double tol) {
  const double cnorm = p.linear.size() ? p.linear.lpNorm<Eigen::Infinity>() : 0.0;
  const double hdiag = p.hessian.rows() ? p.hessian.diagonal().cwiseAbs().maxCoeff() : 1.0;
  const double xs = std::max(x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0, hdiag > 0.0 ? cnorm / hdiag : 0.0);
  const double ls = std::max(cnorm, g.size() ? (g - p.linear).lpNorm<Eigen::Infinity>() : 0.0);
  return {tol * xs, tol * ls};
}

}  // namespace

QpResult QpSolver::solve(const QpProblem& p, const QpOptions& opt, const std::vector<int>& warm_active) {
  const auto n = static_cast<std::size_t>(p.hessian.rows());
  if (p.hessian.cols() != p.hessian.rows() || static_cast<std::size_t>(p.linear.size()) != n) {
    throw std::invalid_argument("QP: Hessian and linear term sizes disagree");
  }
  std::vector<char> is_bound(n, 0);
  for (int i : p.bound_dofs) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw std::invalid_argument("QP: bound index out of range");
    is_bound[i] = 1;
  }

  Cache& cache = *cache_;
  auto solve_eqp = [&](const std::vector<char>& active) -> Eigen::VectorXd {
    const bool reuse = cache.valid && p.hessian_version != 0 && cache.version == p.hessian_version &&
                       cache.active == active;
    if (!reuse) {
      cache.inactive.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) cache.inactive.push_back(static_cast<int>(i));
      }
      cache.valid = false;
      if (!cache.inactive.empty()) {
        cache.ldlt.compute(principal_submatrix(p.hessian, cache.inactive));
        ++cache.factorizations;
        if (cache.ldlt.info() != Eigen::Success || cache.ldlt.vectorD().minCoeff() <= 0.0) {
          throw NumericalError("QP: reduced Hessian is not positive definite");
        }
      }
      cache.active = active;
      cache.version = p.hessian_version;
      cache.valid = true;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (!cache.inactive.empty()) {
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(cache.inactive.size()));
      for (std::size_t k = 0; k < cache.inactive.size(); ++k) rhs[static_cast<Eigen::Index>(k)] = -p.linear[cache.inactive[k]];
      const Eigen::VectorXd xi = cache.ldlt.solve(rhs);
      for (std::size_t k = 0; k < cache.inactive.size(); ++k) x[cache.inactive[k]] = xi[static_cast<Eigen::Index>(k)];
    }
    return x;
  };

  QpResult res;
  auto finish = [&](Eigen::VectorXd x, const std::vector<char>& active) {
    const Eigen::VectorXd g = p.hessian * x + p.linear;
    res.multipliers = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    res.active.clear();
    for (int i : p.bound_dofs) {
      if (active[i]) {
        res.multipliers[i] = g[i];
        res.active.push_back(i);
      }
    }
    res.x = std::move(x);
    res.kkt = kkt_diagnostics(p, res.x, res.multipliers);
    return res;
  };
  auto too_many = [&](const Eigen::VectorXd& x) {
    return NumericalError(fmt::format(
        "QP: more than {} active-set changes after {} iterations (|x|_inf = {:.3e}, objective {:.6e})",
        opt.max_changes, res.iterations, x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0, p.objective(x)));
  };

  std::vector<char> active(n, 0);
  for (int i : warm_active) {
    if (i >= 0 && static_cast<std::size_t>(i) < n && is_bound[i]) active[i] = 1;
  }

  // Primal-dual active set.
  std::set<std::vector<char>> seen;
  Eigen::VectorXd x;
  while (true) {
    ++res.iterations;
    x = solve_eqp(active);
    const Eigen::VectorXd g = p.hessian * x + p.linear;
    const Thresholds th = thresholds(p, x, g, opt.tol);
    std::vector<char> next = active;
    int flips = 0;
    for (int i : p.bound_dofs) {
      if (active[i] && g[i] < -th.lambda) {
        next[i] = 0;
        ++flips;
      } else if (!active[i] && x[i] < -th.x) {
        next[i] = 1;
        ++flips;
      }
    }
    if (flips == 0) return finish(std::move(x), active);
    if (++res.changes > opt.max_changes) throw too_many(x);
    seen.insert(active);
    if (seen.contains(next)) break;  // cycling: switch to the primal method
    active = std::move(next);
  }

  // Primal active set from the projected iterate.
  std::vector<char> work(n, 0);
  for (int i : p.bound_dofs) {
    if (x[i] <= 0.0) {
      x[i] = 0.0;
      work[i] = 1;
    }
  }
  while (true) {
    ++res.iterations;
    const Eigen::VectorXd xs = solve_eqp(work);
    const Eigen::VectorXd step = xs - x;
    const Eigen::VectorXd g = p.hessian * xs + p.linear;
    const Thresholds th = thresholds(p, xs, g, opt.tol);
    if (step.lpNorm<Eigen::Infinity>() <= th.x) {
      int worst = -1;
      for (int i : p.bound_dofs) {
        if (work[i] && g[i] < -th.lambda && (worst < 0 || g[i] < g[worst])) worst = i;
      }
      if (worst < 0) return finish(xs, work);
      work[worst] = 0;
      x = xs;
    } else {
      double alpha = 1.0;
      int block = -1;
      for (int i : p.bound_dofs) {
        if (!work[i] && step[i] < 0.0) {
          const double a = -x[i] / step[i];
          if (a < alpha) {
            alpha = a;
            block = i;
          }
        }
      }
      x += alpha * step;
      if (block < 0) {
        x = xs;
        continue;
      }
      x[block] = 0.0;
      work[block] = 1;
    }
    if (++res.changes > opt.max_changes) throw too_many(x);
  }
}

QpResult solve_qp(const QpProblem& problem, const QpOptions& options, const std::vector<int>& warm_active) {
  QpSolver solver;
  return solver.solve(problem, options, warm_active);
}

}  // namespace delam

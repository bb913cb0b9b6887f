#include "msfv/saddle.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace msfv {

KktSystem project(const SpMat& A, const Eigen::VectorXd& b, const ConstraintSystem& cons,
                  int total_volumes, const CoarseSpace& space, const FineGrid& fg,
                  const BoundaryConditions& bc) {
  KktSystem sys;
  sys.dim_v0 = space.dim();

  std::vector<int> free_dofs;
  sys.lift = Eigen::VectorXd::Zero(fg.num_nodes());
  for (int d = 0; d < space.dim(); ++d) {
    if (bc.is_dirichlet(fg, space.dof_anchor[d])) {
      const double pd = bc.dirichlet_value(fg, space.dof_anchor[d]);
      if (pd != 0.0)
        for (SpMat::InnerIterator it(space.R, d); it; ++it) sys.lift[it.row()] += pd * it.value();
    } else {
      free_dofs.push_back(d);
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < static_cast<int>(free_dofs.size()); ++c)
    for (SpMat::InnerIterator it(space.R, free_dofs[c]); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), c, it.value());
  sys.Rfree.resize(fg.num_nodes(), static_cast<int>(free_dofs.size()));
  sys.Rfree.setFromTriplets(trips.begin(), trips.end());

  sys.A0 = SpMat(sys.Rfree.transpose()) * A * sys.Rfree;
  sys.A0.prune(0.0);
  sys.b0 = sys.Rfree.transpose() * (b - A * sys.lift);
  sys.Ac = cons.A * sys.Rfree;
  sys.Ac.prune(0.0);
  sys.bc0 = cons.b - cons.A * sys.lift;
  sys.num_constraints = static_cast<int>(cons.A.rows());
  sys.reported_size = sys.dim_v0 + total_volumes;
  return sys;
}

namespace {

PressureSolution finish(const KktSystem& sys, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& lambda) {
  PressureSolution sol;
  sol.p = sys.Rfree * u + sys.lift;
  sol.lambda = lambda;
  sol.reported_size = sys.reported_size;
  if (sys.Ac.rows() > 0)
    sol.constraint_residual_max = (sys.Ac * u - sys.bc0).cwiseAbs().maxCoeff();
  Eigen::VectorXd grad = sys.A0 * u - sys.b0;
  if (lambda.size() > 0) grad += sys.Ac.transpose() * lambda;
  sol.stationarity_residual = grad.norm();
  sol.energy = 0.5 * u.dot(sys.A0 * u) - sys.b0.dot(u);
  return sol;
}

}  // namespace

PressureSolution solve_kkt(const KktSystem& sys) {
  const int n = static_cast<int>(sys.A0.rows());
  const int m = static_cast<int>(sys.Ac.rows());
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < n; ++c)
    for (SpMat::InnerIterator it(sys.A0, c); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), c, it.value());
  for (int c = 0; c < n; ++c)
    for (SpMat::InnerIterator it(sys.Ac, c); it; ++it) {
      trips.emplace_back(n + static_cast<int>(it.row()), c, it.value());
      trips.emplace_back(c, n + static_cast<int>(it.row()), it.value());
    }
  SpMat K(n + m, n + m);
  K.setFromTriplets(trips.begin(), trips.end());

  Eigen::SparseLU<SpMat> lu(K);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("singular KKT system: constraint rows are rank deficient");
  Eigen::VectorXd rhs(n + m);
  rhs.head(n) = sys.b0;
  rhs.tail(m) = sys.bc0;
  const Eigen::VectorXd x = lu.solve(rhs);

  PressureSolution sol = finish(sys, x.head(n), x.tail(m));
  const double scale = std::max(1.0, sys.b0.norm());
  if (sol.stationarity_residual > 1e-6 * scale || sol.constraint_residual_max > 1e-6)
    throw std::runtime_error("KKT solve did not reach first-order conditions");
  return sol;
}

PressureSolution solve_galerkin(const KktSystem& sys) {
  Eigen::SimplicialLDLT<SpMat> ldlt(sys.A0);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("coarse Galerkin matrix not SPD");
  const Eigen::VectorXd u = ldlt.solve(sys.b0);
  return finish(sys, u, Eigen::VectorXd());
}

PressureSolution solve_fine_fv(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                               const SourceField& src, const BoundaryConditions& bc) {
  const std::vector<ControlVolume> cvs = fine_control_volumes(fg);
  const ConstraintSystem cons = assemble_constraints(fg, cell_coeff, cvs, src, bc);

  // Unknowns are the non-Dirichlet nodes, in node order; the retained
  // constraint rows are their volumes, so the reduced system is square.
  const int nn = fg.num_nodes();
  std::vector<int> upos(nn, -1);
  std::vector<int> unknowns;
  for (int node = 0; node < nn; ++node)
    if (!bc.is_dirichlet(fg, node)) {
      upos[node] = static_cast<int>(unknowns.size());
      unknowns.push_back(node);
    }
  const int nu = static_cast<int>(unknowns.size());
  if (static_cast<int>(cons.A.rows()) != nu)
    throw std::runtime_error("fine FV system is not square");

  Eigen::VectorXd rhs = cons.b;
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < nn; ++c)
    for (SpMat::InnerIterator it(cons.A, c); it; ++it) {
      if (upos[c] >= 0)
        trips.emplace_back(static_cast<int>(it.row()), upos[c], it.value());
      else
        rhs[it.row()] -= it.value() * bc.dirichlet_value(fg, c);
    }
  SpMat M(nu, nu);
  M.setFromTriplets(trips.begin(), trips.end());

  Eigen::SparseLU<SpMat> lu(M);
  if (lu.info() != Eigen::Success) throw std::runtime_error("singular fine FV system");
  const Eigen::VectorXd x = lu.solve(rhs);

  PressureSolution sol;
  sol.p.resize(nn);
  for (int node = 0; node < nn; ++node)
    sol.p[node] = (upos[node] >= 0) ? x[upos[node]] : bc.dirichlet_value(fg, node);
  sol.constraint_residual_max = (cons.A * sol.p - cons.b).cwiseAbs().maxCoeff();
  sol.reported_size = fg.num_nodes() + static_cast<int>(cvs.size());
  return sol;
}

}  // namespace msfv

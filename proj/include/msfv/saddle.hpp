#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <vector>

#include "msfv/assembly.hpp"
#include "msfv/basis.hpp"
#include "msfv/bc.hpp"
#include "msfv/field.hpp"
#include "msfv/grid.hpp"

namespace msfv {

/// Coarse saddle-point system: energy block projected onto the free
/// columns of the coarse space, flux constraints on the retained
/// volumes, Dirichlet data lifted through the pinned columns.
struct KktSystem {
  SpMat A0;                  // free dofs x free dofs, SPD
  SpMat Ac;                  // constraints x free dofs
  Eigen::VectorXd b0;
  Eigen::VectorXd bc0;
  Eigen::VectorXd lift;      // fine-node Dirichlet lift
  SpMat Rfree;               // fine nodes x free dofs
  int dim_v0 = 0;            // full coarse-space dimension (pinned included)
  int num_constraints = 0;   // retained constraint rows

  /// Size in the reporting convention: dim(V0) plus all volumes of the
  /// constraint level, Dirichlet-owned ones included.
  int reported_size = 0;
};

KktSystem project(const SpMat& A, const Eigen::VectorXd& b, const ConstraintSystem& cons,
                  int total_volumes, const CoarseSpace& space, const FineGrid& fg,
                  const BoundaryConditions& bc);

struct PressureSolution {
  Eigen::VectorXd p;         // fine-node pressures
  Eigen::VectorXd lambda;    // one multiplier per retained constraint
  double constraint_residual_max = 0.0;
  double stationarity_residual = 0.0;
  double energy = 0.0;       // 1/2 p'Ap - b'p when the system is available
  int reported_size = 0;
};

/// Direct symmetric-indefinite solve of the saddle-point system.
PressureSolution solve_kkt(const KktSystem& sys);

/// Unconstrained Ritz-Galerkin solve on the same space (no multipliers).
PressureSolution solve_galerkin(const KktSystem& sys);

/// Classical vertex-centered finite volume solve on the fine grid:
/// square flux-balance system over non-Dirichlet dual volumes.
PressureSolution solve_fine_fv(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                               const SourceField& src, const BoundaryConditions& bc);

}  // namespace msfv

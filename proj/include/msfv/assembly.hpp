#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <vector>

#include "msfv/bc.hpp"
#include "msfv/field.hpp"
#include "msfv/grid.hpp"

namespace msfv {

using SpMat = Eigen::SparseMatrix<double>;

/// Values and gradients of the four bilinear shape functions of a fine
/// cell, evaluated at a physical point inside the cell. Local node order
/// matches global order: a = di + 2*dj over the cell's corner offsets.
struct ShapeEval {
  double n[4];
  double dx[4];
  double dy[4];
};
ShapeEval shape_eval(const FineGrid& fg, int cell, double x, double y);

/// Global node indices of a cell's four corners, local order as above.
void cell_nodes(const FineGrid& fg, int cell, int out[4]);

/// Unit-coefficient element matrices of one fine cell (2x2 Gauss).
void element_stiffness(const FineGrid& fg, int cell, double ke[4][4]);
void element_mass(const FineGrid& fg, int cell, double me[4][4]);

/// Stiffness of the bilinear form with a cell-wise constant coefficient
/// (2x2 Gauss, exact here). Symmetric positive semidefinite; rows sum to
/// zero before boundary conditions.
SpMat assemble_stiffness(const FineGrid& fg, const Eigen::VectorXd& cell_coeff);

/// Mass matrix weighted by a cell-wise constant weight.
SpMat assemble_weighted_mass(const FineGrid& fg, const Eigen::VectorXd& cell_weight);

/// Load vector: volume source minus Neumann boundary functional,
/// b_j = int q phi_j - int_{Gamma_N} g_N phi_j.
Eigen::VectorXd assemble_load(const FineGrid& fg, const SourceField& src,
                              const BoundaryConditions& bc);

/// Flux functional row of one control volume: rho such that
/// rho . v = int_{dV} -coeff grad(v) . n for any fine FE vector v,
/// midpoint quadrature per piece. Pieces on the domain boundary are
/// skipped; their data belongs to the boundary conditions.
Eigen::SparseVector<double> flux_row(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                                     const ControlVolume& cv);

/// Integral of a cell-wise constant source over a control volume.
double source_integral(const FineGrid& fg, const Eigen::VectorXd& cell_values,
                       const ControlVolume& cv);

/// Sum of Neumann data over the domain-boundary pieces of a volume.
double neumann_boundary_integral(const BoundaryConditions& bc, const ControlVolume& cv);

/// Flux-constraint system over the given volumes. Rows for volumes
/// anchored at Dirichlet nodes are dropped (their pressure is pinned);
/// Neumann data is moved to the right-hand side.
struct ConstraintSystem {
  SpMat A;                      // retained rows x fine nodes
  Eigen::VectorXd b;
  std::vector<int> row_volume;  // retained row -> index into the volume list
};

ConstraintSystem assemble_constraints(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                                      const std::vector<ControlVolume>& volumes,
                                      const SourceField& src, const BoundaryConditions& bc);

}  // namespace msfv

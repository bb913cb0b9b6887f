#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <vector>

#include "msfv/field.hpp"
#include "msfv/grid.hpp"

namespace msfv {

/// Multiscale partition of unity: one fine-node coefficient vector per
/// coarse node, each the k-harmonic extension of the bilinear hat trace
/// on the coarse-cell boundaries. The vectors sum to one at every node.
struct PartitionOfUnity {
  std::vector<Eigen::VectorXd> chi;  // per coarse node, fine-node values
};

PartitionOfUnity solve_pou(const CoarseGrid& cg, const PermeabilityField& k);

/// Spectral weight k * sum_j H^2 |grad chi_j|^2, cell-averaged over the
/// 2x2 Gauss points of each fine cell.
Eigen::VectorXd ktilde_weight(const CoarseGrid& cg, const PermeabilityField& k,
                              const PartitionOfUnity& pou);

/// Smallest eigenpairs of the Neumann problem A psi = sigma M psi on a
/// coarse-node neighborhood, assembled over its cells only. Eigenvalues
/// ascend; eigenvectors are M-orthonormal with the largest-magnitude
/// entry made positive.
struct LocalEig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // local nodes x count, ordered as nb.fine_nodes
};

LocalEig local_eig(const Neighborhood& nb, const FineGrid& fg, const PermeabilityField& k,
                   const Eigen::VectorXd& ktilde, int count);

/// Multiscale coarse space: columns of R are the basis functions
/// chi_i * psi_l on fine nodes. Boundary coarse nodes carry a single
/// function (their chi); interior nodes carry L_interior.
struct CoarseSpace {
  Eigen::SparseMatrix<double> R;  // fine nodes x dofs
  std::vector<int> dof_node;      // owning node index (coarse, or fine for identity)
  std::vector<int> dof_level;     // 1-based eigenfunction index within the node
  std::vector<int> dof_anchor;    // fine node at the owning node's position
  std::vector<Eigen::VectorXd> node_eigenvalues;  // per interior coarse node

  int dim() const { return static_cast<int>(R.cols()); }

  /// Column subset keeping at most L functions per node (nested spaces).
  CoarseSpace truncated(int L) const;
};

CoarseSpace build_coarse_space(const CoarseGrid& cg, const PermeabilityField& k, int L_interior);

/// Fine space as a trivial coarse space (R = identity).
CoarseSpace identity_space(const FineGrid& fg);

}  // namespace msfv

#pragma once

#include <Eigen/Core>

#include "msfv/field.hpp"
#include "msfv/grid.hpp"

namespace msfv {

/// Relative errors of a coarse solution against a fine reference, plus
/// the system sizes the row is reported under.
struct ErrorReport {
  double l2k_pct = 0.0;  // relative weighted-L2 error, percent
  double h1k_pct = 0.0;  // relative energy error, percent
  int Nc = 0;            // reported system size dim(V0) + M
  int dim_v0 = 0;
  int Mc = 0;            // number of constrained volumes
};

/// Energy norm sqrt(int k |grad v|^2) of a fine nodal vector.
double energy_norm(const FineGrid& fg, const Eigen::VectorXd& v, const PermeabilityField& k);

/// Weighted L2 norm sqrt(int k v^2).
double weighted_l2_norm(const FineGrid& fg, const Eigen::VectorXd& v, const PermeabilityField& k);

/// Relative errors ||p_ref - p_c|| / ||p_ref|| in both norms, in percent.
/// Throws when a reference norm vanishes.
ErrorReport relative_errors(const FineGrid& fg, const Eigen::VectorXd& p_ref,
                            const Eigen::VectorXd& p_c, const PermeabilityField& k);

/// Relative unweighted L2 error of a saturation profile over fine dual
/// volumes, percent: sums are measure-weighted.
double saturation_l2_error(const FineGrid& fg, const Eigen::VectorXd& S_ref,
                           const Eigen::VectorXd& S_c);

}  // namespace msfv

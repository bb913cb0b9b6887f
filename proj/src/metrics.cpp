#include "msfv/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "msfv/assembly.hpp"

namespace msfv {

namespace {

void check_size(const FineGrid& fg, const Eigen::VectorXd& v) {
  if (v.size() != fg.num_nodes())
    throw std::invalid_argument("vector size does not match grid node count");
}

// v^T (element-assembled k-weighted form) v without forming the global
// sparse matrix.
double quadratic_form(const FineGrid& fg, const Eigen::VectorXd& v, const Eigen::VectorXd& k,
                      bool stiffness) {
  // Uniform grid: every cell shares the same element matrix.
  double E[4][4];
  if (stiffness)
    element_stiffness(fg, 0, E);
  else
    element_mass(fg, 0, E);
  double total = 0.0;
  for (int c = 0; c < fg.num_cells(); ++c) {
    int nodes[4];
    cell_nodes(fg, c, nodes);
    double cell_sum = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) cell_sum += v[nodes[a]] * E[a][b] * v[nodes[b]];
    total += k[c] * cell_sum;
  }
  return total;
}

}  // namespace

double energy_norm(const FineGrid& fg, const Eigen::VectorXd& v, const PermeabilityField& k) {
  check_size(fg, v);
  return std::sqrt(std::max(0.0, quadratic_form(fg, v, k.k, true)));
}

double weighted_l2_norm(const FineGrid& fg, const Eigen::VectorXd& v, const PermeabilityField& k) {
  check_size(fg, v);
  return std::sqrt(std::max(0.0, quadratic_form(fg, v, k.k, false)));
}

ErrorReport relative_errors(const FineGrid& fg, const Eigen::VectorXd& p_ref,
                            const Eigen::VectorXd& p_c, const PermeabilityField& k) {
  const double l2_ref = weighted_l2_norm(fg, p_ref, k);
  const double h1_ref = energy_norm(fg, p_ref, k);
  if (l2_ref == 0.0 || h1_ref == 0.0)
    throw std::invalid_argument("relative error undefined: reference norm is zero");
  ErrorReport rep;
  rep.l2k_pct = 100.0 * weighted_l2_norm(fg, p_ref - p_c, k) / l2_ref;
  rep.h1k_pct = 100.0 * energy_norm(fg, p_ref - p_c, k) / h1_ref;
  return rep;
}

double saturation_l2_error(const FineGrid& fg, const Eigen::VectorXd& S_ref,
                           const Eigen::VectorXd& S_c) {
  check_size(fg, S_ref);
  check_size(fg, S_c);
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j <= fg.ny; ++j) {
    for (int i = 0; i <= fg.nx; ++i) {
      const int n = fg.node(i, j);
      const double meas = fine_volume_measure(fg, i, j);
      const double d = S_ref[n] - S_c[n];
      num += meas * d * d;
      den += meas * S_ref[n] * S_ref[n];
    }
  }
  if (den == 0.0) throw std::invalid_argument("saturation error undefined: reference is zero");
  return 100.0 * std::sqrt(num / den);
}

}  // namespace msfv

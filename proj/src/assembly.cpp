#include "msfv/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace msfv {

void cell_nodes(const FineGrid& fg, int cell, int out[4]) {
  const int ci = fg.cell_i(cell), cj = fg.cell_j(cell);
  out[0] = fg.node(ci, cj);
  out[1] = fg.node(ci + 1, cj);
  out[2] = fg.node(ci, cj + 1);
  out[3] = fg.node(ci + 1, cj + 1);
}

ShapeEval shape_eval(const FineGrid& fg, int cell, double x, double y) {
  const int ci = fg.cell_i(cell), cj = fg.cell_j(cell);
  const double xi = x / fg.hx - ci;
  const double eta = y / fg.hy - cj;
  ShapeEval s;
  s.n[0] = (1 - xi) * (1 - eta);
  s.n[1] = xi * (1 - eta);
  s.n[2] = (1 - xi) * eta;
  s.n[3] = xi * eta;
  s.dx[0] = -(1 - eta) / fg.hx;
  s.dx[1] = (1 - eta) / fg.hx;
  s.dx[2] = -eta / fg.hx;
  s.dx[3] = eta / fg.hx;
  s.dy[0] = -(1 - xi) / fg.hy;
  s.dy[1] = -xi / fg.hy;
  s.dy[2] = (1 - xi) / fg.hy;
  s.dy[3] = xi / fg.hy;
  return s;
}

namespace {

constexpr double kGauss = 0.28867513459481288225;  // 1/(2*sqrt(3))

// 2x2 Gauss points of a cell, physical coordinates, weight hx*hy/4 each.
void gauss_points(const FineGrid& fg, int cell, double xs[4], double ys[4]) {
  const int ci = fg.cell_i(cell), cj = fg.cell_j(cell);
  int g = 0;
  for (double eta : {0.5 - kGauss, 0.5 + kGauss})
    for (double xi : {0.5 - kGauss, 0.5 + kGauss}) {
      xs[g] = (ci + xi) * fg.hx;
      ys[g] = (cj + eta) * fg.hy;
      ++g;
    }
}

void element_matrix(const FineGrid& fg, int cell, bool stiffness, double ke[4][4]) {
  const double w = 0.25 * fg.hx * fg.hy;
  double xs[4], ys[4];
  gauss_points(fg, cell, xs, ys);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) ke[a][b] = 0.0;
  for (int g = 0; g < 4; ++g) {
    const ShapeEval s = shape_eval(fg, cell, xs[g], ys[g]);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        ke[a][b] += w * (stiffness ? s.dx[a] * s.dx[b] + s.dy[a] * s.dy[b] : s.n[a] * s.n[b]);
  }
}

SpMat assemble_cellwise(const FineGrid& fg, const Eigen::VectorXd& cell_coeff, bool stiffness) {
  if (cell_coeff.size() != fg.num_cells())
    throw std::invalid_argument("cell coefficient size mismatch");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(16 * fg.num_cells());
  int nodes[4];
  double ke[4][4];
  for (int c = 0; c < fg.num_cells(); ++c) {
    cell_nodes(fg, c, nodes);
    element_matrix(fg, c, stiffness, ke);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        trips.emplace_back(nodes[a], nodes[b], cell_coeff[c] * ke[a][b]);
  }
  SpMat A(fg.num_nodes(), fg.num_nodes());
  A.setFromTriplets(trips.begin(), trips.end());
  A.prune(0.0);
  return A;
}

}  // namespace

void element_stiffness(const FineGrid& fg, int cell, double ke[4][4]) {
  element_matrix(fg, cell, true, ke);
}

void element_mass(const FineGrid& fg, int cell, double me[4][4]) {
  element_matrix(fg, cell, false, me);
}

SpMat assemble_stiffness(const FineGrid& fg, const Eigen::VectorXd& cell_coeff) {
  return assemble_cellwise(fg, cell_coeff, true);
}

SpMat assemble_weighted_mass(const FineGrid& fg, const Eigen::VectorXd& cell_weight) {
  if (cell_weight.minCoeff() <= 0.0) throw std::invalid_argument("mass weight must be positive");
  return assemble_cellwise(fg, cell_weight, false);
}

Eigen::VectorXd assemble_load(const FineGrid& fg, const SourceField& src,
                              const BoundaryConditions& bc) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(fg.num_nodes());
  const double quarter = 0.25 * fg.hx * fg.hy;
  int nodes[4];
  for (int c = 0; c < fg.num_cells(); ++c) {
    if (src.q[c] == 0.0) continue;
    cell_nodes(fg, c, nodes);
    for (int a = 0; a < 4; ++a) b[nodes[a]] += src.q[c] * quarter;
  }
  using T = SideCondition::Type;
  auto edge_contrib = [&](int n0, int n1, double g, double len) {
    b[n0] -= 0.5 * g * len;
    b[n1] -= 0.5 * g * len;
  };
  if (bc.left.type == T::Neumann && bc.left.value != 0.0)
    for (int j = 0; j < fg.ny; ++j)
      edge_contrib(fg.node(0, j), fg.node(0, j + 1), bc.left.value, fg.hy);
  if (bc.right.type == T::Neumann && bc.right.value != 0.0)
    for (int j = 0; j < fg.ny; ++j)
      edge_contrib(fg.node(fg.nx, j), fg.node(fg.nx, j + 1), bc.right.value, fg.hy);
  if (bc.bottom.type == T::Neumann && bc.bottom.value != 0.0)
    for (int i = 0; i < fg.nx; ++i)
      edge_contrib(fg.node(i, 0), fg.node(i + 1, 0), bc.bottom.value, fg.hx);
  if (bc.top.type == T::Neumann && bc.top.value != 0.0)
    for (int i = 0; i < fg.nx; ++i)
      edge_contrib(fg.node(i, fg.ny), fg.node(i + 1, fg.ny), bc.top.value, fg.hx);
  return b;
}

Eigen::SparseVector<double> flux_row(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                                     const ControlVolume& cv) {
  Eigen::SparseVector<double> row(fg.num_nodes());
  int nodes[4];
  for (const BoundaryPiece& bp : cv.boundary) {
    if (bp.domain_side != BoundarySide::None) continue;
    const ShapeEval s = shape_eval(fg, bp.cell, bp.mx, bp.my);
    const double* dn = (bp.axis == 0) ? s.dx : s.dy;
    cell_nodes(fg, bp.cell, nodes);
    const double scale = -cell_coeff[bp.cell] * bp.sign * bp.len;
    for (int a = 0; a < 4; ++a) row.coeffRef(nodes[a]) += scale * dn[a];
  }
  return row;
}

double source_integral(const FineGrid& fg, const Eigen::VectorXd& cell_values,
                       const ControlVolume& cv) {
  // Each fine node's dual volume overlaps its up-to-four incident cells
  // by a quarter cell.
  const double quarter = 0.25 * fg.hx * fg.hy;
  double total = 0.0;
  for (int n : cv.fine_nodes) {
    const int i = fg.node_i(n), j = fg.node_j(n);
    for (int cj = j - 1; cj <= j; ++cj)
      for (int ci = i - 1; ci <= i; ++ci)
        if (ci >= 0 && ci < fg.nx && cj >= 0 && cj < fg.ny)
          total += cell_values[fg.cell(ci, cj)] * quarter;
  }
  return total;
}

double neumann_boundary_integral(const BoundaryConditions& bc, const ControlVolume& cv) {
  double total = 0.0;
  for (const BoundaryPiece& bp : cv.boundary) {
    if (bp.domain_side == BoundarySide::None) continue;
    const SideCondition& sc = bc.side(bp.domain_side);
    if (sc.type == SideCondition::Type::Neumann) total += sc.value * bp.len;
  }
  return total;
}

ConstraintSystem assemble_constraints(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                                      const std::vector<ControlVolume>& volumes,
                                      const SourceField& src, const BoundaryConditions& bc) {
  ConstraintSystem sys;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> rhs;
  for (int v = 0; v < static_cast<int>(volumes.size()); ++v) {
    const ControlVolume& cv = volumes[v];
    if (bc.is_dirichlet(fg, cv.anchor)) continue;
    const int r = static_cast<int>(rhs.size());
    const Eigen::SparseVector<double> row = flux_row(fg, cell_coeff, cv);
    for (Eigen::SparseVector<double>::InnerIterator it(row); it; ++it)
      trips.emplace_back(r, it.index(), it.value());
    rhs.push_back(source_integral(fg, src.q, cv) - neumann_boundary_integral(bc, cv));
    sys.row_volume.push_back(v);
  }
  sys.A.resize(static_cast<int>(rhs.size()), fg.num_nodes());
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), rhs.size());
  return sys;
}

}  // namespace msfv

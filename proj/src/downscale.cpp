#include "msfv/downscale.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msfv {

namespace {

// Endpoints of the dual edge a piece belongs to.
void edge_endpoints(const FineGrid& fg, int axis, int edge_id, int& n0, int& n1) {
  if (axis == 0) {
    const int i = edge_id % fg.nx, j = edge_id / fg.nx;
    n0 = fg.node(i, j);
    n1 = fg.node(i + 1, j);
  } else {
    const int i = edge_id % (fg.nx + 1), j = edge_id / (fg.nx + 1);
    n0 = fg.node(i, j);
    n1 = fg.node(i, j + 1);
  }
}

double clip_extent(int idx, int count, double h) {
  const double lo = std::max(0.0, (idx - 0.5) * h);
  const double hi = std::min(count * h, (idx + 0.5) * h);
  return hi - lo;
}

// Integral of the cell-wise source over one fine dual volume.
double node_source_integral(const FineGrid& fg, const Eigen::VectorXd& q, int i, int j) {
  const double quarter = 0.25 * fg.hx * fg.hy;
  double total = 0.0;
  for (int cj = j - 1; cj <= j; ++cj)
    for (int ci = i - 1; ci <= i; ++ci)
      if (ci >= 0 && ci < fg.nx && cj >= 0 && cj < fg.ny) total += q[fg.cell(ci, cj)] * quarter;
  return total;
}

}  // namespace

FluxField FluxField::zero(const FineGrid& fg) {
  FluxField f;
  f.fg = fg;
  f.fx = Eigen::VectorXd::Zero(fg.num_x_edges());
  f.fy = Eigen::VectorXd::Zero(fg.num_y_edges());
  f.bleft = Eigen::VectorXd::Zero(fg.ny + 1);
  f.bright = Eigen::VectorXd::Zero(fg.ny + 1);
  f.bbot = Eigen::VectorXd::Zero(fg.nx + 1);
  f.btop = Eigen::VectorXd::Zero(fg.nx + 1);
  return f;
}

double& FluxField::boundary_face(BoundarySide side, int idx) {
  switch (side) {
    case BoundarySide::Left: return bleft[idx];
    case BoundarySide::Right: return bright[idx];
    case BoundarySide::Bottom: return bbot[idx];
    case BoundarySide::Top: return btop[idx];
    default: throw std::invalid_argument("boundary_face requires a domain side");
  }
}

double FluxField::boundary_face(BoundarySide side, int idx) const {
  return const_cast<FluxField*>(this)->boundary_face(side, idx);
}

double FluxField::net_outflux(int i, int j) const {
  double net = 0.0;
  net += (i < fg.nx) ? fx[fg.x_edge(i, j)] : bright[j];
  net -= (i > 0) ? fx[fg.x_edge(i - 1, j)] : -bleft[j];
  net += (j < fg.ny) ? fy[fg.y_edge(i, j)] : btop[i];
  net -= (j > 0) ? fy[fg.y_edge(i, j - 1)] : -bbot[i];
  return net;
}

double piece_flux(const FineGrid& fg, const Eigen::VectorXd& cell_coeff, const Eigen::VectorXd& p,
                  const BoundaryPiece& bp) {
  const ShapeEval s = shape_eval(fg, bp.cell, bp.mx, bp.my);
  const double* dn = (bp.axis == 0) ? s.dx : s.dy;
  int nodes[4];
  cell_nodes(fg, bp.cell, nodes);
  double grad = 0.0;
  for (int a = 0; a < 4; ++a) grad += dn[a] * p[nodes[a]];
  return -cell_coeff[bp.cell] * grad * bp.sign * bp.len;
}

std::vector<double> coarse_boundary_flux(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                                         const Eigen::VectorXd& p, const ControlVolume& cv,
                                         const BoundaryConditions& bc) {
  std::vector<double> values;
  values.reserve(cv.boundary.size());
  for (const BoundaryPiece& bp : cv.boundary) {
    if (bp.domain_side == BoundarySide::None) {
      values.push_back(piece_flux(fg, cell_coeff, p, bp));
    } else {
      const SideCondition& sc = bc.side(bp.domain_side);
      values.push_back(sc.type == SideCondition::Type::Neumann ? sc.value * bp.len : 0.0);
    }
  }
  return values;
}

namespace {

// Appends (node, coefficient) pairs for one quadrature piece in the
// edge's stored orientation. Pieces owned by a cell with a node outside
// the local volume fall back to the two-point difference along the edge;
// it is exact for linear fields, so the homogeneous case is unchanged.
void piece_coeffs(const FineGrid& fg, const Eigen::VectorXd& cell_coeff, const BoundaryPiece& bp,
                  bool cell_inside, std::vector<std::pair<int, double>>& out) {
  if (cell_inside) {
    const ShapeEval s = shape_eval(fg, bp.cell, bp.mx, bp.my);
    const double* dn = (bp.axis == 0) ? s.dx : s.dy;
    int nodes[4];
    cell_nodes(fg, bp.cell, nodes);
    for (int a = 0; a < 4; ++a) out.emplace_back(nodes[a], -cell_coeff[bp.cell] * dn[a] * bp.len);
  } else {
    int n0, n1;
    edge_endpoints(fg, bp.axis, bp.edge_id, n0, n1);
    const double h = (bp.axis == 0) ? fg.hx : fg.hy;
    const double t = cell_coeff[bp.cell] * bp.len / h;
    out.emplace_back(n0, t);
    out.emplace_back(n1, -t);
  }
}

void close_dirichlet_faces(const FineGrid& fg, FluxField& F, const SourceField& src,
                           const BoundaryConditions& bc) {
  using T = SideCondition::Type;
  for (int j = 0; j <= fg.ny; ++j)
    for (int i = 0; i <= fg.nx; ++i) {
      if (i != 0 && i != fg.nx && j != 0 && j != fg.ny) continue;
      std::vector<std::pair<BoundarySide, int>> faces;
      if (i == 0 && bc.left.type == T::Dirichlet) faces.push_back({BoundarySide::Left, j});
      if (i == fg.nx && bc.right.type == T::Dirichlet) faces.push_back({BoundarySide::Right, j});
      if (j == 0 && bc.bottom.type == T::Dirichlet) faces.push_back({BoundarySide::Bottom, i});
      if (j == fg.ny && bc.top.type == T::Dirichlet) faces.push_back({BoundarySide::Top, i});
      if (faces.empty()) continue;
      for (auto& f : faces) F.boundary_face(f.first, f.second) = 0.0;
      const double r = node_source_integral(fg, src.q, i, j) - F.net_outflux(i, j);
      for (auto& f : faces) F.boundary_face(f.first, f.second) = r / faces.size();
    }
}

void set_neumann_faces(const FineGrid& fg, FluxField& F, const BoundaryConditions& bc) {
  using T = SideCondition::Type;
  for (int j = 0; j <= fg.ny; ++j) {
    const double len = clip_extent(j, fg.ny, fg.hy);
    if (bc.left.type == T::Neumann) F.bleft[j] = bc.left.value * len;
    if (bc.right.type == T::Neumann) F.bright[j] = bc.right.value * len;
  }
  for (int i = 0; i <= fg.nx; ++i) {
    const double len = clip_extent(i, fg.nx, fg.hx);
    if (bc.bottom.type == T::Neumann) F.bbot[i] = bc.bottom.value * len;
    if (bc.top.type == T::Neumann) F.btop[i] = bc.top.value * len;
  }
}

double stored_edge_flux(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                        const Eigen::VectorXd& p, int axis, int i, int j) {
  double total = 0.0;
  const auto pieces = (axis == 0) ? x_edge_pieces(fg, i, j) : y_edge_pieces(fg, i, j);
  for (const BoundaryPiece& bp : pieces) total += piece_flux(fg, cell_coeff, p, bp);
  return total;
}

}  // namespace

FluxField fine_flux_field(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                          const Eigen::VectorXd& p, const SourceField& src,
                          const BoundaryConditions& bc) {
  FluxField F = FluxField::zero(fg);
  for (int j = 0; j <= fg.ny; ++j)
    for (int i = 0; i < fg.nx; ++i) F.fx[fg.x_edge(i, j)] = stored_edge_flux(fg, cell_coeff, p, 0, i, j);
  for (int j = 0; j < fg.ny; ++j)
    for (int i = 0; i <= fg.nx; ++i) F.fy[fg.y_edge(i, j)] = stored_edge_flux(fg, cell_coeff, p, 1, i, j);
  set_neumann_faces(fg, F, bc);
  close_dirichlet_faces(fg, F, src, bc);
  return F;
}

FluxField downscale_all(const Eigen::VectorXd& p_fv, const CoarseGrid& cg,
                        const Eigen::VectorXd& cell_coeff, const SourceField& src,
                        const BoundaryConditions& bc,
                        const std::vector<ControlVolume>& coarse_volumes) {
  const FineGrid& fg = cg.fine;
  FluxField F = FluxField::zero(fg);

  std::vector<int> vol_of(fg.num_nodes(), -1);
  for (int v = 0; v < static_cast<int>(coarse_volumes.size()); ++v)
    for (int n : coarse_volumes[v].fine_nodes) vol_of[n] = v;

  // Interface fluxes come from the coarse solution and are shared by the
  // two adjacent local problems.
  std::vector<char> fx_done(fg.num_x_edges(), 0), fy_done(fg.num_y_edges(), 0);
  for (const ControlVolume& cv : coarse_volumes)
    for (const BoundaryPiece& bp : cv.boundary) {
      if (bp.domain_side != BoundarySide::None) continue;
      std::vector<char>& done = (bp.axis == 0) ? fx_done : fy_done;
      if (done[bp.edge_id]) continue;
      done[bp.edge_id] = 1;
      if (bp.axis == 0)
        F.fx[bp.edge_id] =
            stored_edge_flux(fg, cell_coeff, p_fv, 0, bp.edge_id % fg.nx, bp.edge_id / fg.nx);
      else
        F.fy[bp.edge_id] = stored_edge_flux(fg, cell_coeff, p_fv, 1, bp.edge_id % (fg.nx + 1),
                                            bp.edge_id / (fg.nx + 1));
    }
  set_neumann_faces(fg, F, bc);

  // Independent local Neumann solves, one per coarse volume.
  std::vector<std::pair<int, double>> coeffs;
  for (int v = 0; v < static_cast<int>(coarse_volumes.size()); ++v) {
    const ControlVolume& cv = coarse_volumes[v];
    std::vector<int> upos_of(fg.num_nodes(), -1);
    std::vector<int> unknowns;
    bool has_dirichlet = false;
    for (int n : cv.fine_nodes) {
      if (bc.is_dirichlet(fg, n)) {
        has_dirichlet = true;
      } else {
        upos_of[n] = static_cast<int>(unknowns.size());
        unknowns.push_back(n);
      }
    }
    const int nu = static_cast<int>(unknowns.size());

    auto in_volume = [&](int node) { return vol_of[node] == v; };
    auto cell_inside = [&](int cell) {
      int nodes[4];
      cell_nodes(fg, cell, nodes);
      for (int a = 0; a < 4; ++a)
        if (!in_volume(nodes[a])) return false;
      return true;
    };

    // Flux of the stored-orientation dual edge (i,j,axis) as local
    // coefficients; the balance rows and the output evaluation share it.
    auto edge_coeffs = [&](int axis, int i, int j, std::vector<std::pair<int, double>>& out) {
      out.clear();
      const auto pieces = (axis == 0) ? x_edge_pieces(fg, i, j) : y_edge_pieces(fg, i, j);
      for (const BoundaryPiece& bp : pieces) piece_coeffs(fg, cell_coeff, bp, cell_inside(bp.cell), out);
    };

    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(has_dirichlet ? nu : nu + 1);
    for (int r = 0; r < nu; ++r) {
      const int n = unknowns[r];
      const int i = fg.node_i(n), j = fg.node_j(n);
      rhs[r] = node_source_integral(fg, src.q, i, j);
      // Domain faces (a non-Dirichlet node can only touch Neumann sides).
      if (i == 0) rhs[r] -= bc.left.value * clip_extent(j, fg.ny, fg.hy);
      if (i == fg.nx) rhs[r] -= bc.right.value * clip_extent(j, fg.ny, fg.hy);
      if (j == 0) rhs[r] -= bc.bottom.value * clip_extent(i, fg.nx, fg.hx);
      if (j == fg.ny) rhs[r] -= bc.top.value * clip_extent(i, fg.nx, fg.hx);
      // Four incident dual edges.
      struct Inc { int axis, ei, ej, other, sign; };
      std::vector<Inc> inc;
      if (i < fg.nx) inc.push_back({0, i, j, fg.node(i + 1, j), +1});
      if (i > 0) inc.push_back({0, i - 1, j, fg.node(i - 1, j), -1});
      if (j < fg.ny) inc.push_back({1, i, j, fg.node(i, j + 1), +1});
      if (j > 0) inc.push_back({1, i, j - 1, fg.node(i, j - 1), -1});
      for (const Inc& e : inc) {
        if (!in_volume(e.other)) {
          // Prescribed interface value from the coarse solution.
          const double stored =
              (e.axis == 0) ? F.fx[fg.x_edge(e.ei, e.ej)] : F.fy[fg.y_edge(e.ei, e.ej)];
          rhs[r] -= e.sign * stored;
          continue;
        }
        edge_coeffs(e.axis, e.ei, e.ej, coeffs);
        for (const auto& [node, c] : coeffs) {
          const double val = e.sign * c;
          if (upos_of[node] >= 0)
            trips.emplace_back(r, upos_of[node], val);
          else
            rhs[r] -= val * bc.dirichlet_value(fg, node);
        }
      }
    }

    Eigen::VectorXd p_loc = Eigen::VectorXd::Zero(fg.num_nodes());
    if (nu > 0) {
      int dim = nu;
      if (!has_dirichlet) {
        // Pure Neumann: check compatibility, then pin the mean to zero.
        double scale = 1.0;
        for (int r = 0; r < nu; ++r) scale = std::max(scale, std::abs(rhs[r]));
        if (std::abs(rhs.head(nu).sum()) > 1e-8 * scale * nu)
          throw std::runtime_error("incompatible Neumann data in local downscaling problem");
        for (int r = 0; r < nu; ++r) {
          trips.emplace_back(r, nu, 1.0);
          trips.emplace_back(nu, r, 1.0);
        }
        dim = nu + 1;
      }
      SpMat B(dim, dim);
      B.setFromTriplets(trips.begin(), trips.end());
      Eigen::SparseLU<SpMat> lu(B);
      if (lu.info() != Eigen::Success) throw std::runtime_error("singular local downscaling system");
      const Eigen::VectorXd x = lu.solve(rhs);
      for (int r = 0; r < nu; ++r) p_loc[unknowns[r]] = x[r];
    }
    for (int n : cv.fine_nodes)
      if (bc.is_dirichlet(fg, n)) p_loc[n] = bc.dirichlet_value(fg, n);

    // Fine fluxes on the edges interior to this volume.
    for (int n : cv.fine_nodes) {
      const int i = fg.node_i(n), j = fg.node_j(n);
      if (i < fg.nx && in_volume(fg.node(i + 1, j))) {
        edge_coeffs(0, i, j, coeffs);
        double val = 0.0;
        for (const auto& [node, c] : coeffs) val += c * p_loc[node];
        F.fx[fg.x_edge(i, j)] = val;
      }
      if (j < fg.ny && in_volume(fg.node(i, j + 1))) {
        edge_coeffs(1, i, j, coeffs);
        double val = 0.0;
        for (const auto& [node, c] : coeffs) val += c * p_loc[node];
        F.fy[fg.y_edge(i, j)] = val;
      }
    }
  }

  close_dirichlet_faces(fg, F, src, bc);
  return F;
}

double conservation_residual(const FineGrid& fg, const FluxField& flux, const SourceField& src) {
  double worst = 0.0;
  for (int j = 0; j <= fg.ny; ++j)
    for (int i = 0; i <= fg.nx; ++i)
      worst = std::max(worst,
                       std::abs(flux.net_outflux(i, j) - node_source_integral(fg, src.q, i, j)));
  return worst;
}

}  // namespace msfv

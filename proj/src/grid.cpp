#include "msfv/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace msfv {

FineGrid build_fine_grid(int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid must be at least 2x2 cells");
  FineGrid fg;
  fg.nx = nx;
  fg.ny = ny;
  fg.hx = 1.0 / nx;
  fg.hy = 1.0 / ny;
  return fg;
}

CoarseGrid build_coarse_grid(const FineGrid& fg, int NX, int NY) {
  if (NX < 1 || NY < 1) throw std::invalid_argument("coarse grid must have positive size");
  if (fg.nx % NX != 0 || fg.ny % NY != 0)
    throw std::invalid_argument("fine grid size must be divisible by coarse grid size");
  CoarseGrid cg;
  cg.fine = fg;
  cg.NX = NX;
  cg.NY = NY;
  cg.rx = fg.nx / NX;
  cg.ry = fg.ny / NY;
  cg.HX = 1.0 / NX;
  cg.HY = 1.0 / NY;
  return cg;
}

Neighborhood neighborhood(const CoarseGrid& cg, int node) {
  if (node < 0 || node >= cg.num_nodes()) throw std::out_of_range("coarse node index out of range");
  Neighborhood nb;
  nb.node = node;
  const int I = cg.node_I(node);
  const int J = cg.node_J(node);
  for (int dj = -1; dj <= 0; ++dj)
    for (int di = -1; di <= 0; ++di) {
      const int ci = I + di, cj = J + dj;
      if (ci >= 0 && ci < cg.NX && cj >= 0 && cj < cg.NY) nb.coarse_cells.push_back(cg.cell(ci, cj));
    }
  nb.i0 = std::max(0, (I - 1) * cg.rx);
  nb.i1 = std::min(cg.fine.nx, (I + 1) * cg.rx);
  nb.j0 = std::max(0, (J - 1) * cg.ry);
  nb.j1 = std::min(cg.fine.ny, (J + 1) * cg.ry);
  nb.fine_nodes.reserve((nb.i1 - nb.i0 + 1) * (nb.j1 - nb.j0 + 1));
  for (int j = nb.j0; j <= nb.j1; ++j)
    for (int i = nb.i0; i <= nb.i1; ++i) nb.fine_nodes.push_back(cg.fine.node(i, j));
  return nb;
}

double fine_volume_measure(const FineGrid& fg, int i, int j) {
  const double xlo = std::max(0.0, (i - 0.5) * fg.hx);
  const double xhi = std::min(1.0, (i + 0.5) * fg.hx);
  const double ylo = std::max(0.0, (j - 0.5) * fg.hy);
  const double yhi = std::min(1.0, (j + 0.5) * fg.hy);
  return (xhi - xlo) * (yhi - ylo);
}

namespace {

// Quadrature pieces of the x-dual-edge between nodes (i,j) and (i+1,j):
// a vertical line x=(i+1/2)hx split at the horizontal node line y=j*hy.
// Each half belongs to one fine cell. Analogous for y-edges.
struct EdgePiece {
  int cell;
  double mx, my, len;
};

std::vector<EdgePiece> x_edge_piece_list(const FineGrid& fg, int i, int j) {
  std::vector<EdgePiece> out;
  const double x = (i + 0.5) * fg.hx;
  if (j >= 1) out.push_back({fg.cell(i, j - 1), x, (j - 0.25) * fg.hy, 0.5 * fg.hy});
  if (j <= fg.ny - 1) out.push_back({fg.cell(i, j), x, (j + 0.25) * fg.hy, 0.5 * fg.hy});
  return out;
}

std::vector<EdgePiece> y_edge_piece_list(const FineGrid& fg, int i, int j) {
  std::vector<EdgePiece> out;
  const double y = (j + 0.5) * fg.hy;
  if (i >= 1) out.push_back({fg.cell(i - 1, j), (i - 0.25) * fg.hx, y, 0.5 * fg.hx});
  if (i <= fg.nx - 1) out.push_back({fg.cell(i, j), (i + 0.25) * fg.hx, y, 0.5 * fg.hx});
  return out;
}

}  // namespace

std::vector<BoundaryPiece> x_edge_pieces(const FineGrid& fg, int i, int j) {
  std::vector<BoundaryPiece> out;
  for (const EdgePiece& ep : x_edge_piece_list(fg, i, j)) {
    BoundaryPiece bp;
    bp.cell = ep.cell;
    bp.axis = 0;
    bp.sign = 1;
    bp.mx = ep.mx;
    bp.my = ep.my;
    bp.len = ep.len;
    bp.edge_id = fg.x_edge(i, j);
    bp.edge_sign = 1;
    out.push_back(bp);
  }
  return out;
}

std::vector<BoundaryPiece> y_edge_pieces(const FineGrid& fg, int i, int j) {
  std::vector<BoundaryPiece> out;
  for (const EdgePiece& ep : y_edge_piece_list(fg, i, j)) {
    BoundaryPiece bp;
    bp.cell = ep.cell;
    bp.axis = 1;
    bp.sign = 1;
    bp.mx = ep.mx;
    bp.my = ep.my;
    bp.len = ep.len;
    bp.edge_id = fg.y_edge(i, j);
    bp.edge_sign = 1;
    out.push_back(bp);
  }
  return out;
}

namespace {

void append_x_edge(const FineGrid& fg, int i, int j, int sign, std::vector<BoundaryPiece>& out) {
  for (const EdgePiece& ep : x_edge_piece_list(fg, i, j)) {
    BoundaryPiece bp;
    bp.cell = ep.cell;
    bp.axis = 0;
    bp.sign = sign;
    bp.mx = ep.mx;
    bp.my = ep.my;
    bp.len = ep.len;
    bp.edge_id = fg.x_edge(i, j);
    bp.edge_sign = sign;  // stored orientation is +x
    out.push_back(bp);
  }
}

void append_y_edge(const FineGrid& fg, int i, int j, int sign, std::vector<BoundaryPiece>& out) {
  for (const EdgePiece& ep : y_edge_piece_list(fg, i, j)) {
    BoundaryPiece bp;
    bp.cell = ep.cell;
    bp.axis = 1;
    bp.sign = sign;
    bp.mx = ep.mx;
    bp.my = ep.my;
    bp.len = ep.len;
    bp.edge_id = fg.y_edge(i, j);
    bp.edge_sign = sign;  // stored orientation is +y
    out.push_back(bp);
  }
}

// Outer-boundary face of the dual volume of node (i,j) on the given side.
void append_domain_face(const FineGrid& fg, int i, int j, BoundarySide side,
                        std::vector<BoundaryPiece>& out) {
  const double xlo = std::max(0.0, (i - 0.5) * fg.hx);
  const double xhi = std::min(1.0, (i + 0.5) * fg.hx);
  const double ylo = std::max(0.0, (j - 0.5) * fg.hy);
  const double yhi = std::min(1.0, (j + 0.5) * fg.hy);
  BoundaryPiece bp;
  bp.domain_side = side;
  bp.edge_sign = 1;  // boundary faces are stored outward
  switch (side) {
    case BoundarySide::Left:
      bp.axis = 0; bp.sign = -1; bp.mx = 0.0; bp.my = 0.5 * (ylo + yhi); bp.len = yhi - ylo;
      bp.edge_id = j;
      break;
    case BoundarySide::Right:
      bp.axis = 0; bp.sign = 1; bp.mx = 1.0; bp.my = 0.5 * (ylo + yhi); bp.len = yhi - ylo;
      bp.edge_id = j;
      break;
    case BoundarySide::Bottom:
      bp.axis = 1; bp.sign = -1; bp.mx = 0.5 * (xlo + xhi); bp.my = 0.0; bp.len = xhi - xlo;
      bp.edge_id = i;
      break;
    case BoundarySide::Top:
      bp.axis = 1; bp.sign = 1; bp.mx = 0.5 * (xlo + xhi); bp.my = 1.0; bp.len = xhi - xlo;
      bp.edge_id = i;
      break;
    default:
      return;
  }
  out.push_back(bp);
}

// Boundary of the union of fine dual volumes with node indices in
// [ia,ib] x [ja,jb]: interface dual edges plus domain faces.
void build_box_boundary(const FineGrid& fg, int ia, int ib, int ja, int jb,
                        std::vector<BoundaryPiece>& out) {
  for (int j = ja; j <= jb; ++j) {
    if (ib < fg.nx) append_x_edge(fg, ib, j, +1, out);
    if (ia > 0) append_x_edge(fg, ia - 1, j, -1, out);
    if (ia == 0) append_domain_face(fg, 0, j, BoundarySide::Left, out);
    if (ib == fg.nx) append_domain_face(fg, fg.nx, j, BoundarySide::Right, out);
  }
  for (int i = ia; i <= ib; ++i) {
    if (jb < fg.ny) append_y_edge(fg, i, jb, +1, out);
    if (ja > 0) append_y_edge(fg, i, ja - 1, -1, out);
    if (ja == 0) append_domain_face(fg, i, 0, BoundarySide::Bottom, out);
    if (jb == fg.ny) append_domain_face(fg, i, fg.ny, BoundarySide::Top, out);
  }
}

}  // namespace

std::vector<ControlVolume> fine_control_volumes(const FineGrid& fg) {
  std::vector<ControlVolume> cvs;
  cvs.reserve(fg.num_nodes());
  for (int j = 0; j <= fg.ny; ++j)
    for (int i = 0; i <= fg.nx; ++i) {
      ControlVolume cv;
      cv.owner = fg.node(i, j);
      cv.anchor = cv.owner;
      cv.level = GridLevel::Fine;
      cv.measure = fine_volume_measure(fg, i, j);
      cv.ia = cv.ib = i;
      cv.ja = cv.jb = j;
      cv.fine_nodes = {cv.owner};
      build_box_boundary(fg, i, i, j, j, cv.boundary);
      cvs.push_back(std::move(cv));
    }
  return cvs;
}

std::vector<ControlVolume> coarse_control_volumes(const CoarseGrid& cg) {
  const FineGrid& fg = cg.fine;
  // Index ranges per coarse node from the nearest-node assignment.
  std::vector<int> ia(cg.NX + 1, fg.nx + 1), ib(cg.NX + 1, -1);
  std::vector<int> ja(cg.NY + 1, fg.ny + 1), jb(cg.NY + 1, -1);
  for (int i = 0; i <= fg.nx; ++i) {
    const int I = CoarseGrid::assign(i, cg.rx);
    ia[I] = std::min(ia[I], i);
    ib[I] = std::max(ib[I], i);
  }
  for (int j = 0; j <= fg.ny; ++j) {
    const int J = CoarseGrid::assign(j, cg.ry);
    ja[J] = std::min(ja[J], j);
    jb[J] = std::max(jb[J], j);
  }
  std::vector<ControlVolume> cvs;
  cvs.reserve(cg.num_nodes());
  for (int J = 0; J <= cg.NY; ++J)
    for (int I = 0; I <= cg.NX; ++I) {
      ControlVolume cv;
      cv.owner = cg.node(I, J);
      cv.anchor = cg.anchor_fine_node(cv.owner);
      cv.level = GridLevel::Coarse;
      cv.ia = ia[I]; cv.ib = ib[I]; cv.ja = ja[J]; cv.jb = jb[J];
      for (int j = cv.ja; j <= cv.jb; ++j)
        for (int i = cv.ia; i <= cv.ib; ++i) {
          cv.fine_nodes.push_back(fg.node(i, j));
          cv.measure += fine_volume_measure(fg, i, j);
        }
      build_box_boundary(fg, cv.ia, cv.ib, cv.ja, cv.jb, cv.boundary);
      cvs.push_back(std::move(cv));
    }
  return cvs;
}

}  // namespace msfv

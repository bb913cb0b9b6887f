#pragma once

#include <vector>

namespace msfv {

/// Uniform rectilinear grid on the unit square: nx x ny cells,
/// (nx+1) x (ny+1) nodes, row-major from the bottom-left corner.
struct FineGrid {
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;

  int num_nodes() const { return (nx + 1) * (ny + 1); }
  int num_cells() const { return nx * ny; }

  int node(int i, int j) const { return j * (nx + 1) + i; }
  int cell(int i, int j) const { return j * nx + i; }

  int node_i(int n) const { return n % (nx + 1); }
  int node_j(int n) const { return n / (nx + 1); }
  int cell_i(int c) const { return c % nx; }
  int cell_j(int c) const { return c / nx; }

  double node_x(int n) const { return node_i(n) * hx; }
  double node_y(int n) const { return node_j(n) * hy; }

  // Dual-edge index maps. An x-edge (normal +x) sits between nodes
  // (i,j) and (i+1,j); a y-edge (normal +y) between (i,j) and (i,j+1).
  int num_x_edges() const { return nx * (ny + 1); }
  int num_y_edges() const { return (nx + 1) * ny; }
  int x_edge(int i, int j) const { return j * nx + i; }
  int y_edge(int i, int j) const { return j * (nx + 1) + i; }
};

FineGrid build_fine_grid(int nx, int ny);

/// Coarse overlay of a fine grid; the refinement ratio per axis is integer.
struct CoarseGrid {
  FineGrid fine;
  int NX = 0;
  int NY = 0;
  int rx = 0;
  int ry = 0;
  double HX = 0.0;
  double HY = 0.0;

  int num_nodes() const { return (NX + 1) * (NY + 1); }
  int num_cells() const { return NX * NY; }
  int node(int I, int J) const { return J * (NX + 1) + I; }
  int cell(int I, int J) const { return J * NX + I; }
  int node_I(int n) const { return n % (NX + 1); }
  int node_J(int n) const { return n / (NX + 1); }

  /// Fine node sitting at coarse node n.
  int anchor_fine_node(int n) const {
    return fine.node(node_I(n) * rx, node_J(n) * ry);
  }

  /// Nearest-coarse-node assignment along one axis (ties go up).
  static int assign(int i, int r) { return (2 * i + r) / (2 * r); }
};

CoarseGrid build_coarse_grid(const FineGrid& fg, int NX, int NY);

/// Coarse cells sharing a coarse node, plus the fine nodes they cover.
struct Neighborhood {
  int node = -1;                      // coarse node index
  std::vector<int> coarse_cells;      // coarse cell indices touching the node
  int i0 = 0, i1 = 0, j0 = 0, j1 = 0; // fine-node index bounds (inclusive)
  std::vector<int> fine_nodes;        // local -> global fine node map
};

Neighborhood neighborhood(const CoarseGrid& cg, int node);

enum class GridLevel { Fine, Coarse };
enum class BoundarySide { None, Left, Right, Bottom, Top };

/// One straight quadrature segment of a control-volume boundary.
/// Interior segments lie on fine-cell midlines inside a single cell;
/// domain segments lie on the outer boundary of the unit square.
struct BoundaryPiece {
  int cell = -1;               // owning fine cell (-1 for domain pieces)
  int axis = 0;                // 0: normal along x, 1: normal along y
  int sign = 1;                // outward direction along the axis
  double mx = 0.0, my = 0.0;   // midpoint
  double len = 0.0;
  BoundarySide domain_side = BoundarySide::None;
  int edge_id = -1;            // dual-edge id (or boundary-face id)
  int edge_sign = 1;           // stored edge orientation -> outward
};

/// Node-centered dual volume. Fine volumes are midline-to-midline squares
/// clipped to the domain; coarse volumes are unions of the fine volumes of
/// their nearest fine nodes, so one level tiles exactly into the other.
struct ControlVolume {
  int owner = -1;
  int anchor = -1;  // fine node at the owner node's position
  GridLevel level = GridLevel::Fine;
  double measure = 0.0;
  int ia = 0, ib = 0, ja = 0, jb = 0; // covered fine-node index ranges
  std::vector<int> fine_nodes;
  std::vector<BoundaryPiece> boundary;
};

/// Quadrature pieces of one dual edge in its stored (+x / +y) orientation.
std::vector<BoundaryPiece> x_edge_pieces(const FineGrid& fg, int i, int j);
std::vector<BoundaryPiece> y_edge_pieces(const FineGrid& fg, int i, int j);

std::vector<ControlVolume> fine_control_volumes(const FineGrid& fg);
std::vector<ControlVolume> coarse_control_volumes(const CoarseGrid& cg);

/// Measure of the fine dual volume of node (i,j).
double fine_volume_measure(const FineGrid& fg, int i, int j);

}  // namespace msfv

#include "msfv/bc.hpp"

#include <stdexcept>

namespace msfv {

const SideCondition& BoundaryConditions::side(BoundarySide s) const {
  switch (s) {
    case BoundarySide::Left: return left;
    case BoundarySide::Right: return right;
    case BoundarySide::Bottom: return bottom;
    case BoundarySide::Top: return top;
    default: throw std::invalid_argument("side() requires a domain side");
  }
}

bool BoundaryConditions::is_dirichlet(const FineGrid& fg, int node) const {
  const int i = fg.node_i(node), j = fg.node_j(node);
  using T = SideCondition::Type;
  if (i == 0 && left.type == T::Dirichlet) return true;
  if (i == fg.nx && right.type == T::Dirichlet) return true;
  if (j == 0 && bottom.type == T::Dirichlet) return true;
  if (j == fg.ny && top.type == T::Dirichlet) return true;
  return false;
}

double BoundaryConditions::dirichlet_value(const FineGrid& fg, int node) const {
  const int i = fg.node_i(node), j = fg.node_j(node);
  using T = SideCondition::Type;
  if (i == 0 && left.type == T::Dirichlet) return left.value;
  if (i == fg.nx && right.type == T::Dirichlet) return right.value;
  if (j == 0 && bottom.type == T::Dirichlet) return bottom.value;
  if (j == fg.ny && top.type == T::Dirichlet) return top.value;
  throw std::invalid_argument("node is not on a Dirichlet boundary");
}

std::vector<int> BoundaryConditions::dirichlet_nodes(const FineGrid& fg) const {
  std::vector<int> nodes;
  for (int n = 0; n < fg.num_nodes(); ++n)
    if (is_dirichlet(fg, n)) nodes.push_back(n);
  return nodes;
}

}  // namespace msfv

#pragma once

#include <vector>

#include "msfv/grid.hpp"

namespace msfv {

/// Per-side boundary condition: Dirichlet pressure or Neumann flux density.
struct SideCondition {
  enum class Type { Dirichlet, Neumann };
  Type type = Type::Neumann;
  double value = 0.0;
};

struct BoundaryConditions {
  SideCondition left, right, bottom, top;

  /// Left/right Dirichlet pressures, no-flow top and bottom.
  static BoundaryConditions pressure_drop(double p_left, double p_right) {
    BoundaryConditions bc;
    bc.left = {SideCondition::Type::Dirichlet, p_left};
    bc.right = {SideCondition::Type::Dirichlet, p_right};
    return bc;
  }

  const SideCondition& side(BoundarySide s) const;

  /// A node on any Dirichlet side is a Dirichlet node; a Dirichlet
  /// corner takes the value of its first Dirichlet side (left, right,
  /// bottom, top order).
  bool is_dirichlet(const FineGrid& fg, int node) const;
  double dirichlet_value(const FineGrid& fg, int node) const;

  std::vector<int> dirichlet_nodes(const FineGrid& fg) const;
};

}  // namespace msfv

#pragma once

#include <Eigen/Core>
#include <vector>

#include "msfv/assembly.hpp"
#include "msfv/bc.hpp"
#include "msfv/grid.hpp"

namespace msfv {

/// Conservative fine-scale velocity: one signed value per fine dual edge
/// (stored in the +x / +y orientation) plus outward values on the dual
/// faces lying on the domain boundary.
struct FluxField {
  FineGrid fg;
  Eigen::VectorXd fx;      // nx*(ny+1) interior x-edges
  Eigen::VectorXd fy;      // (nx+1)*ny interior y-edges
  Eigen::VectorXd bleft;   // (ny+1) outward faces on x=0
  Eigen::VectorXd bright;  // (ny+1) outward faces on x=1
  Eigen::VectorXd bbot;    // (nx+1) outward faces on y=0
  Eigen::VectorXd btop;    // (nx+1) outward faces on y=1

  static FluxField zero(const FineGrid& fg);

  double& boundary_face(BoundarySide side, int idx);
  double boundary_face(BoundarySide side, int idx) const;

  /// Net outward flux of the dual volume of node (i,j).
  double net_outflux(int i, int j) const;
};

/// Midpoint flux of one quadrature piece from a fine FE vector, in the
/// piece's outward direction.
double piece_flux(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                  const Eigen::VectorXd& p, const BoundaryPiece& bp);

/// Per-piece boundary data of a coarse volume: interior pieces evaluated
/// from the pressure, Neumann faces prescribed. Dirichlet faces carry no
/// functional and are returned as zero.
std::vector<double> coarse_boundary_flux(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                                         const Eigen::VectorXd& p, const ControlVolume& cv,
                                         const BoundaryConditions& bc);

/// Flux field of a fine FV/FE pressure solution: interior edges by
/// midpoint quadrature, Neumann faces prescribed, Dirichlet faces closed
/// by the volume balance.
FluxField fine_flux_field(const FineGrid& fg, const Eigen::VectorXd& cell_coeff,
                          const Eigen::VectorXd& p, const SourceField& src,
                          const BoundaryConditions& bc);

/// Downscaling: local fine FV Neumann solves on every coarse volume,
/// driven by the coarse solution's boundary fluxes, stitched into a
/// globally conservative fine flux field.
FluxField downscale_all(const Eigen::VectorXd& p_fv, const CoarseGrid& cg,
                        const Eigen::VectorXd& cell_coeff, const SourceField& src,
                        const BoundaryConditions& bc,
                        const std::vector<ControlVolume>& coarse_volumes);

/// Max over all fine dual volumes of |net outward flux - int q|.
double conservation_residual(const FineGrid& fg, const FluxField& flux, const SourceField& src);

}  // namespace msfv

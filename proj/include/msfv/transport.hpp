#pragma once

#include <Eigen/Core>

#include "msfv/bc.hpp"
#include "msfv/downscale.hpp"
#include "msfv/field.hpp"
#include "msfv/grid.hpp"

namespace msfv {

/// Immiscible two-phase fluid data with quadratic relative permeability
/// curves k_rw = S^2, k_ro = (1-S)^2.
struct FluidProps {
  double mu_w = 1.0;
  double mu_o = 5.0;
};

/// Total mobility k_rw/mu_w + k_ro/mu_o.
double total_mobility(double S, const FluidProps& props);

/// Water fractional flow (k_rw/mu_w) / total mobility; in [0,1] and
/// nondecreasing for the quadratic curves.
double fractional_flow(double S, const FluidProps& props);

/// Upper bound of f'(S) on [0,1] (dense scan).
double max_fractional_flow_slope(const FluidProps& props);

/// Cell-average saturation per fine dual volume plus the clock.
struct SaturationState {
  Eigen::VectorXd S;  // per fine node (dual volume), in [0,1]
  double t = 0.0;

  static SaturationState zero(const FineGrid& fg) { return {Eigen::VectorXd::Zero(fg.num_nodes()), 0.0}; }
};

/// Largest stable explicit step for the donor-cell update:
/// min over volumes of meas(V) / (sum of outflows * max f').
/// Infinity when nothing flows.
double cfl_dt(const FineGrid& fg, const FluxField& flux, const FluidProps& props);

/// One explicit donor-cell upwind step. Inflow through the domain
/// boundary carries the saturation inflow_sat; outflow is upwinded from
/// inside. Throws on a CFL violation or an overshoot beyond round-off.
SaturationState advance_saturation(const FineGrid& fg, const SaturationState& state,
                                   const FluxField& flux, const Eigen::VectorXd& qw, double dt,
                                   double inflow_sat, const FluidProps& props);

/// Cell mobility for the next pressure solve: Lambda(S) with S averaged
/// over the cell's four corner volumes.
Eigen::VectorXd cell_mobility(const FineGrid& fg, const Eigen::VectorXd& S,
                              const FluidProps& props);

}  // namespace msfv

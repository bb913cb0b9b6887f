#include "msfv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace msfv {

namespace {

void check_range(double S) {
  if (!(S >= 0.0 && S <= 1.0))
    throw std::domain_error("saturation out of [0,1]: " + std::to_string(S));
}

// Integral of the cell-wise water source over one fine dual volume.
double node_water_source(const FineGrid& fg, const Eigen::VectorXd& qw, int i, int j) {
  const double quarter = 0.25 * fg.hx * fg.hy;
  double total = 0.0;
  for (int cj = j - 1; cj <= j; ++cj)
    for (int ci = i - 1; ci <= i; ++ci)
      if (ci >= 0 && ci < fg.nx && cj >= 0 && cj < fg.ny) total += qw[fg.cell(ci, cj)] * quarter;
  return total;
}

}  // namespace

double total_mobility(double S, const FluidProps& props) {
  check_range(S);
  return S * S / props.mu_w + (1.0 - S) * (1.0 - S) / props.mu_o;
}

double fractional_flow(double S, const FluidProps& props) {
  check_range(S);
  return (S * S / props.mu_w) / total_mobility(S, props);
}

double max_fractional_flow_slope(const FluidProps& props) {
  const int n = 20000;
  double fmax = 0.0;
  double prev = fractional_flow(0.0, props);
  for (int i = 1; i <= n; ++i) {
    const double cur = fractional_flow(double(i) / n, props);
    fmax = std::max(fmax, std::abs(cur - prev) * n);
    prev = cur;
  }
  return fmax;
}

double cfl_dt(const FineGrid& fg, const FluxField& flux, const FluidProps& props) {
  const double slope = max_fractional_flow_slope(props);
  double dt = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= fg.ny; ++j) {
    for (int i = 0; i <= fg.nx; ++i) {
      // Sum of outgoing face fluxes of the dual volume.
      double out = 0.0;
      auto take = [&](double f) { if (f > 0.0) out += f; };
      take((i < fg.nx) ? flux.fx[fg.x_edge(i, j)] : flux.bright[j]);
      take((i > 0) ? -flux.fx[fg.x_edge(i - 1, j)] : flux.bleft[j]);
      take((j < fg.ny) ? flux.fy[fg.y_edge(i, j)] : flux.btop[i]);
      take((j > 0) ? -flux.fy[fg.y_edge(i, j - 1)] : flux.bbot[i]);
      if (out > 0.0) dt = std::min(dt, fine_volume_measure(fg, i, j) / (out * slope));
    }
  }
  return dt;
}

SaturationState advance_saturation(const FineGrid& fg, const SaturationState& state,
                                   const FluxField& flux, const Eigen::VectorXd& qw, double dt,
                                   double inflow_sat, const FluidProps& props) {
  if (dt <= 0.0) throw std::invalid_argument("time step must be positive");
  const double dt_max = cfl_dt(fg, flux, props);
  if (dt > dt_max)
    throw std::runtime_error("CFL violation: dt = " + std::to_string(dt) +
                             " exceeds dt_max = " + std::to_string(dt_max));

  const Eigen::VectorXd& S = state.S;
  Eigen::VectorXd net = Eigen::VectorXd::Zero(fg.num_nodes());  // water outflux balance

  // Interior dual edges: donor-cell upwind in the stored orientation.
  for (int j = 0; j <= fg.ny; ++j) {
    for (int i = 0; i < fg.nx; ++i) {
      const double F = flux.fx[fg.x_edge(i, j)];
      const int up = F >= 0.0 ? fg.node(i, j) : fg.node(i + 1, j);
      const double W = F * fractional_flow(S[up], props);
      net[fg.node(i, j)] += W;
      net[fg.node(i + 1, j)] -= W;
    }
  }
  for (int j = 0; j < fg.ny; ++j) {
    for (int i = 0; i <= fg.nx; ++i) {
      const double F = flux.fy[fg.y_edge(i, j)];
      const int up = F >= 0.0 ? fg.node(i, j) : fg.node(i, j + 1);
      const double W = F * fractional_flow(S[up], props);
      net[fg.node(i, j)] += W;
      net[fg.node(i, j + 1)] -= W;
    }
  }
  // Domain faces: outflow upwinds from inside, inflow carries inflow_sat.
  auto boundary = [&](BoundarySide side, int idx, int node) {
    const double F = flux.boundary_face(side, idx);
    const double Sup = F >= 0.0 ? S[node] : inflow_sat;
    net[node] += F * fractional_flow(Sup, props);
  };
  for (int j = 0; j <= fg.ny; ++j) {
    boundary(BoundarySide::Left, j, fg.node(0, j));
    boundary(BoundarySide::Right, j, fg.node(fg.nx, j));
  }
  for (int i = 0; i <= fg.nx; ++i) {
    boundary(BoundarySide::Bottom, i, fg.node(i, 0));
    boundary(BoundarySide::Top, i, fg.node(i, fg.ny));
  }

  SaturationState next;
  next.t = state.t + dt;
  next.S.resize(fg.num_nodes());
  const double tol = 1e-12;
  for (int j = 0; j <= fg.ny; ++j) {
    for (int i = 0; i <= fg.nx; ++i) {
      const int n = fg.node(i, j);
      const double meas = fine_volume_measure(fg, i, j);
      double v = S[n] + dt / meas * (node_water_source(fg, qw, i, j) - net[n]);
      if (v < -tol || v > 1.0 + tol)
        throw std::runtime_error("saturation overshoot beyond tolerance at node " +
                                 std::to_string(n) + ": " + std::to_string(v));
      next.S[n] = std::clamp(v, 0.0, 1.0);
    }
  }
  return next;
}

Eigen::VectorXd cell_mobility(const FineGrid& fg, const Eigen::VectorXd& S,
                              const FluidProps& props) {
  Eigen::VectorXd lam(fg.num_cells());
  for (int j = 0; j < fg.ny; ++j) {
    for (int i = 0; i < fg.nx; ++i) {
      const double avg = 0.25 * (S[fg.node(i, j)] + S[fg.node(i + 1, j)] +
                                 S[fg.node(i, j + 1)] + S[fg.node(i + 1, j + 1)]);
      lam[fg.cell(i, j)] = total_mobility(avg, props);
    }
  }
  return lam;
}

}  // namespace msfv

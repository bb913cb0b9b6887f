#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "msfv/grid.hpp"

namespace msfv {

/// Cell-wise positive scalar permeability on the fine grid.
struct PermeabilityField {
  Eigen::VectorXd k;  // one value per fine cell, row-major from bottom-left

  double kmin() const { return k.minCoeff(); }
  double kmax() const { return k.maxCoeff(); }
  double contrast() const { return kmax() / kmin(); }
};

/// Cell-wise external forcing: total source q and water source q_w.
struct SourceField {
  Eigen::VectorXd q;
  Eigen::VectorXd qw;

  static SourceField zero(const FineGrid& fg) {
    SourceField s;
    s.q = Eigen::VectorXd::Zero(fg.num_cells());
    s.qw = Eigen::VectorXd::Zero(fg.num_cells());
    return s;
  }
};

/// Rectangular high-permeability feature, in fine-cell index coordinates.
/// Channels span the full width; inclusions are small squares.
struct Feature {
  enum class Kind { Channel, Inclusion };
  Kind kind = Kind::Channel;
  int i0 = 0, i1 = 0;  // cell column range, inclusive
  int j0 = 0, j1 = 0;  // cell row range, inclusive
};

PermeabilityField load_field(const std::string& path, const FineGrid& fg);
void save_field(const std::string& path, const FineGrid& fg, const Eigen::VectorXd& cell_values);

/// Writes any row-major grid sampling (nodal or cell data) one row per line.
void save_grid_values(const std::string& path, int ncols, const Eigen::VectorXd& values);
Eigen::VectorXd load_grid_values(const std::string& path, int expected_size);

PermeabilityField gen_channel_field(const FineGrid& fg, double background, double contrast,
                                    const std::vector<Feature>& features);

/// Default stand-in heterogeneity: three horizontal channels of width 2
/// fine cells plus eight 4x4 inclusions placed by the seeded generator.
std::vector<Feature> default_geometry(const FineGrid& fg, unsigned seed);

std::string field_summary(const FineGrid& fg, const PermeabilityField& field);

}  // namespace msfv

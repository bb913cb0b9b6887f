#include "msfv/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace msfv {

Eigen::VectorXd load_grid_values(const std::string& path, int expected_size) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field file: " + path);
  std::vector<double> vals;
  vals.reserve(expected_size);
  double v;
  while (in >> v) vals.push_back(v);
  if (!in.eof()) throw std::runtime_error("unparsable token in field file: " + path);
  if (static_cast<int>(vals.size()) != expected_size) {
    std::ostringstream msg;
    msg << "size mismatch in " << path << ": expected " << expected_size << " values, got "
        << vals.size();
    throw std::runtime_error(msg.str());
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
}

void save_grid_values(const std::string& path, int ncols, const Eigen::VectorXd& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.precision(17);
  for (int idx = 0; idx < values.size(); ++idx) {
    out << values[idx];
    out << (((idx + 1) % ncols == 0) ? '\n' : ' ');
  }
}

PermeabilityField load_field(const std::string& path, const FineGrid& fg) {
  PermeabilityField field;
  field.k = load_grid_values(path, fg.num_cells());
  for (int c = 0; c < field.k.size(); ++c) {
    if (!(field.k[c] > 0.0) || !std::isfinite(field.k[c]))
      throw std::runtime_error("non-positive permeability at cell " + std::to_string(c));
  }
  return field;
}

void save_field(const std::string& path, const FineGrid& fg, const Eigen::VectorXd& cell_values) {
  save_grid_values(path, fg.nx, cell_values);
}

PermeabilityField gen_channel_field(const FineGrid& fg, double background, double contrast,
                                    const std::vector<Feature>& features) {
  if (!(background > 0.0)) throw std::invalid_argument("background permeability must be positive");
  if (contrast < 1.0) throw std::invalid_argument("contrast must be >= 1");
  PermeabilityField field;
  field.k = Eigen::VectorXd::Constant(fg.num_cells(), background);
  const double kf = background * contrast;
  for (const Feature& f : features) {
    if (f.j0 > f.j1 || f.i0 > f.i1) throw std::invalid_argument("degenerate feature geometry");
    for (int j = std::max(0, f.j0); j <= std::min(fg.ny - 1, f.j1); ++j)
      for (int i = std::max(0, f.i0); i <= std::min(fg.nx - 1, f.i1); ++i)
        field.k[fg.cell(i, j)] = kf;
  }
  return field;
}

std::vector<Feature> default_geometry(const FineGrid& fg, unsigned seed) {
  std::vector<Feature> feats;
  // Three full-width channels, two cells tall, at fixed relative heights.
  for (double frac : {0.2, 0.5, 0.8}) {
    const int j0 = std::clamp(static_cast<int>(frac * fg.ny), 0, fg.ny - 2);
    feats.push_back({Feature::Kind::Channel, 0, fg.nx - 1, j0, j0 + 1});
  }
  // Eight square inclusions of side 4 (scaled down on small grids),
  // placed by the seed.
  const int side = std::max(1, std::min(4, fg.nx / 8));
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> di(0, std::max(0, fg.nx - 1 - side));
  std::uniform_int_distribution<int> dj(0, std::max(0, fg.ny - 1 - side));
  for (int n = 0; n < 8; ++n) {
    const int i0 = di(rng), j0 = dj(rng);
    feats.push_back({Feature::Kind::Inclusion, i0, i0 + side - 1, j0, j0 + side - 1});
  }
  return feats;
}

std::string field_summary(const FineGrid& fg, const PermeabilityField& field) {
  std::ostringstream out;
  out.precision(17);
  out << "nx=" << fg.nx << "\nny=" << fg.ny << "\nkmin=" << field.kmin()
      << "\nkmax=" << field.kmax() << "\ncontrast=" << field.contrast() << "\n";
  return out.str();
}

}  // namespace msfv

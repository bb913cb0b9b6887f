#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "msfv/assembly.hpp"
#include "msfv/basis.hpp"

using namespace msfv;

namespace {

PermeabilityField heterogeneous(const FineGrid& fg, double contrast) {
  return gen_channel_field(fg, 1.0, contrast, default_geometry(fg, 4));
}

}  // namespace

TEST_CASE("partition of unity sums to one for heterogeneous k") {
  const FineGrid fg = build_fine_grid(12, 12);
  const CoarseGrid cg = build_coarse_grid(fg, 3, 3);
  const PermeabilityField k = heterogeneous(fg, 1e3);
  const PartitionOfUnity pou = solve_pou(cg, k);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(fg.num_nodes());
  for (const auto& chi : pou.chi) sum += chi;
  CHECK((sum.array() - 1.0).abs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("homogeneous k reproduces the bilinear hats") {
  const FineGrid fg = build_fine_grid(8, 8);
  const CoarseGrid cg = build_coarse_grid(fg, 2, 2);
  PermeabilityField k;
  k.k = Eigen::VectorXd::Ones(fg.num_cells());
  const PartitionOfUnity pou = solve_pou(cg, k);
  const int cn = cg.node(1, 1);  // center coarse node, support = all 4 cells
  for (int n = 0; n < fg.num_nodes(); ++n) {
    const double x = fg.node_x(n), y = fg.node_y(n);
    const double hat = std::max(0.0, 1.0 - std::abs(x - 0.5) / 0.5) *
                       std::max(0.0, 1.0 - std::abs(y - 0.5) / 0.5);
    CHECK(pou.chi[cn][n] == doctest::Approx(hat).epsilon(1e-12));
  }
}

TEST_CASE("ktilde matches the closed form on one homogeneous coarse cell") {
  // Single coarse cell over the unit square, k = 1, H = 1: the four chi
  // are the corner hats and sum |grad chi|^2 = 2(1-x)^2 + 2x^2 + 2(1-y)^2
  // + 2y^2, averaged over the 2x2 Gauss points of each fine cell.
  const FineGrid fg = build_fine_grid(4, 4);
  const CoarseGrid cg = build_coarse_grid(fg, 1, 1);
  PermeabilityField k;
  k.k = Eigen::VectorXd::Ones(fg.num_cells());
  const PartitionOfUnity pou = solve_pou(cg, k);
  const Eigen::VectorXd kt = ktilde_weight(cg, k, pou);
  const double g = 0.28867513459481288225;
  for (int c = 0; c < fg.num_cells(); ++c) {
    double expected = 0.0;
    for (double eta : {0.5 - g, 0.5 + g})
      for (double xi : {0.5 - g, 0.5 + g}) {
        const double x = (fg.cell_i(c) + xi) * fg.hx;
        const double y = (fg.cell_j(c) + eta) * fg.hy;
        expected += 0.25 * (2 * (1 - x) * (1 - x) + 2 * x * x + 2 * (1 - y) * (1 - y) +
                            2 * y * y);
      }
    CHECK(kt[c] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("local eigenpairs: residual, M-orthonormality, ascending order, near-null first mode") {
  const FineGrid fg = build_fine_grid(12, 12);
  const CoarseGrid cg = build_coarse_grid(fg, 3, 3);
  const PermeabilityField k = heterogeneous(fg, 1e3);
  const PartitionOfUnity pou = solve_pou(cg, k);
  const Eigen::VectorXd kt = ktilde_weight(cg, k, pou);
  const Neighborhood nb = neighborhood(cg, cg.node(1, 1));
  const int count = 6;
  const LocalEig eig = local_eig(nb, fg, k, kt, count);

  // Rebuild the dense pencil independently of the solver call.
  const int n = static_cast<int>(nb.fine_nodes.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), M = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> loc(fg.num_nodes(), -1);
  for (int l = 0; l < n; ++l) loc[nb.fine_nodes[l]] = l;
  double ke[4][4], me[4][4];
  int nodes[4];
  for (int cj = nb.j0; cj < nb.j1; ++cj)
    for (int ci = nb.i0; ci < nb.i1; ++ci) {
      const int cell = fg.cell(ci, cj);
      element_stiffness(fg, cell, ke);
      element_mass(fg, cell, me);
      cell_nodes(fg, cell, nodes);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          A(loc[nodes[a]], loc[nodes[b]]) += k.k[cell] * ke[a][b];
          M(loc[nodes[a]], loc[nodes[b]]) += kt[cell] * me[a][b];
        }
    }

  for (int c = 0; c < count; ++c) {
    const Eigen::VectorXd v = eig.vectors.col(c);
    CHECK((A * v - eig.values[c] * (M * v)).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-8));
    for (int d = 0; d <= c; ++d)
      CHECK(eig.vectors.col(d).dot(M * v) == doctest::Approx(c == d ? 1.0 : 0.0).epsilon(1e-10));
    if (c > 0) CHECK(eig.values[c] >= eig.values[c - 1]);
  }
  CHECK(std::abs(eig.values[0]) < 1e-10);  // Neumann problem: constants
  CHECK_THROWS(local_eig(nb, fg, k, kt, n + 1));
}

TEST_CASE("coarse space dimension: boundary nodes one function, interior L") {
  const FineGrid fg = build_fine_grid(12, 12);
  const CoarseGrid cg = build_coarse_grid(fg, 3, 3);
  const PermeabilityField k = heterogeneous(fg, 100.0);
  // 16 coarse nodes, 12 on the boundary, 4 interior.
  for (int L : {1, 2, 3}) {
    const CoarseSpace vs = build_coarse_space(cg, k, L);
    CHECK(vs.dim() == 12 + 4 * L);
  }
  const CoarseSpace full = build_coarse_space(cg, k, 3);
  const CoarseSpace cut = full.truncated(2);
  CHECK(cut.dim() == 12 + 4 * 2);
  // Truncation keeps leading columns of each node block.
  const CoarseSpace direct = build_coarse_space(cg, k, 2);
  CHECK((Eigen::MatrixXd(cut.R) - Eigen::MatrixXd(direct.R)).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("enrichment is monotone in the energy functional") {
  // Nested spaces: min J over V_L decreases as L grows.
  const FineGrid fg = build_fine_grid(16, 16);
  const CoarseGrid cg = build_coarse_grid(fg, 4, 4);
  const PermeabilityField k = heterogeneous(fg, 1e3);
  const SpMat A = assemble_stiffness(fg, k.k);
  Eigen::VectorXd b(fg.num_nodes());
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < fg.num_nodes(); ++n) b[n] = u(rng);
  b.array() -= b.mean();  // compatible with the Neumann null space
  const CoarseSpace full = build_coarse_space(cg, k, 4);
  double prev = 1e300;
  for (int L : {1, 2, 3, 4}) {
    const CoarseSpace sp = full.truncated(L);
    // Unconstrained minimization of J(v) = 1/2 v'Av - b'v over the space;
    // the projected system is singular but consistent, so any solution
    // attains the minimum J = -b0'c/2.
    const Eigen::MatrixXd A0 = Eigen::MatrixXd(SpMat(sp.R.transpose() * A * sp.R));
    const Eigen::VectorXd b0 = sp.R.transpose() * b;
    const Eigen::VectorXd c = A0.completeOrthogonalDecomposition().solve(b0);
    const double J = -0.5 * b0.dot(c);
    CHECK(J <= prev + 1e-12);
    prev = J;
  }
}

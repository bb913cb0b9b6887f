#include "msfv/basis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "msfv/assembly.hpp"

namespace msfv {

namespace {

// Bilinear hat of coarse-cell corner a (local order di + 2*dj) at local
// cell coordinates (xi, eta) in [0,1]^2.
double corner_hat(int a, double xi, double eta) {
  const double fx = (a % 2 == 0) ? 1.0 - xi : xi;
  const double fy = (a / 2 == 0) ? 1.0 - eta : eta;
  return fx * fy;
}

}  // namespace

PartitionOfUnity solve_pou(const CoarseGrid& cg, const PermeabilityField& k) {
  const FineGrid& fg = cg.fine;
  PartitionOfUnity pou;
  pou.chi.assign(cg.num_nodes(), Eigen::VectorXd::Zero(fg.num_nodes()));

  const int rx = cg.rx, ry = cg.ry;
  const int nloc = (rx + 1) * (ry + 1);
  auto lidx = [rx](int li, int lj) { return lj * (rx + 1) + li; };

  for (int CJ = 0; CJ < cg.NY; ++CJ)
    for (int CI = 0; CI < cg.NX; ++CI) {
      // Interior/boundary split of the cell's fine nodes.
      std::vector<int> ipos(nloc, -1);
      std::vector<int> interior;
      for (int lj = 0; lj <= ry; ++lj)
        for (int li = 0; li <= rx; ++li)
          if (li > 0 && li < rx && lj > 0 && lj < ry) {
            ipos[lidx(li, lj)] = static_cast<int>(interior.size());
            interior.push_back(lidx(li, lj));
          }

      Eigen::MatrixXd Aii = Eigen::MatrixXd::Zero(interior.size(), interior.size());
      Eigen::MatrixXd Aib = Eigen::MatrixXd::Zero(interior.size(), nloc);
      double ke[4][4];
      for (int cj = 0; cj < ry; ++cj)
        for (int ci = 0; ci < rx; ++ci) {
          const int cell = fg.cell(CI * rx + ci, CJ * ry + cj);
          element_stiffness(fg, cell, ke);
          const int loc[4] = {lidx(ci, cj), lidx(ci + 1, cj), lidx(ci, cj + 1),
                              lidx(ci + 1, cj + 1)};
          for (int a = 0; a < 4; ++a) {
            if (ipos[loc[a]] < 0) continue;
            for (int b = 0; b < 4; ++b) {
              const double v = k.k[cell] * ke[a][b];
              if (ipos[loc[b]] >= 0)
                Aii(ipos[loc[a]], ipos[loc[b]]) += v;
              else
                Aib(ipos[loc[a]], loc[b]) += v;
            }
          }
        }

      Eigen::LDLT<Eigen::MatrixXd> solver;
      if (!interior.empty()) solver.compute(Aii);

      for (int a = 0; a < 4; ++a) {
        const int cnode = cg.node(CI + a % 2, CJ + a / 2);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(nloc);
        for (int lj = 0; lj <= ry; ++lj)
          for (int li = 0; li <= rx; ++li)
            if (li == 0 || li == rx || lj == 0 || lj == ry)
              g[lidx(li, lj)] = corner_hat(a, double(li) / rx, double(lj) / ry);
        Eigen::VectorXd x;
        if (!interior.empty()) x = solver.solve(-Aib * g);
        Eigen::VectorXd& chi = pou.chi[cnode];
        for (int lj = 0; lj <= ry; ++lj)
          for (int li = 0; li <= rx; ++li) {
            const int l = lidx(li, lj);
            const int gn = fg.node(CI * rx + li, CJ * ry + lj);
            chi[gn] = (ipos[l] >= 0) ? x[ipos[l]] : g[l];
          }
      }
    }
  return pou;
}

Eigen::VectorXd ktilde_weight(const CoarseGrid& cg, const PermeabilityField& k,
                              const PartitionOfUnity& pou) {
  const FineGrid& fg = cg.fine;
  const double H2 = cg.HX * cg.HY;
  constexpr double kGauss = 0.28867513459481288225;
  Eigen::VectorXd kt = Eigen::VectorXd::Zero(fg.num_cells());
  int nodes[4];
  for (int c = 0; c < fg.num_cells(); ++c) {
    const int CI = fg.cell_i(c) / cg.rx, CJ = fg.cell_j(c) / cg.ry;
    cell_nodes(fg, c, nodes);
    double sum = 0.0;
    for (int a = 0; a < 4; ++a) {
      const Eigen::VectorXd& chi = pou.chi[cg.node(CI + a % 2, CJ + a / 2)];
      for (double eta : {0.5 - kGauss, 0.5 + kGauss})
        for (double xi : {0.5 - kGauss, 0.5 + kGauss}) {
          const double x = (fg.cell_i(c) + xi) * fg.hx;
          const double y = (fg.cell_j(c) + eta) * fg.hy;
          const ShapeEval s = shape_eval(fg, c, x, y);
          double gx = 0.0, gy = 0.0;
          for (int b = 0; b < 4; ++b) {
            gx += chi[nodes[b]] * s.dx[b];
            gy += chi[nodes[b]] * s.dy[b];
          }
          sum += 0.25 * (gx * gx + gy * gy);
        }
    }
    kt[c] = k.k[c] * H2 * sum;
  }
  return kt;
}

LocalEig local_eig(const Neighborhood& nb, const FineGrid& fg, const PermeabilityField& k,
                   const Eigen::VectorXd& ktilde, int count) {
  const int n = static_cast<int>(nb.fine_nodes.size());
  if (count < 1 || count > n) throw std::invalid_argument("eigenpair count out of range");

  std::unordered_map<int, int> loc;
  loc.reserve(n);
  for (int l = 0; l < n; ++l) loc[nb.fine_nodes[l]] = l;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  double ke[4][4], me[4][4];
  int nodes[4];
  for (int cj = nb.j0; cj < nb.j1; ++cj)
    for (int ci = nb.i0; ci < nb.i1; ++ci) {
      const int cell = fg.cell(ci, cj);
      element_stiffness(fg, cell, ke);
      element_mass(fg, cell, me);
      cell_nodes(fg, cell, nodes);
      int l[4];
      for (int a = 0; a < 4; ++a) l[a] = loc.at(nodes[a]);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          A(l[a], l[b]) += k.k[cell] * ke[a][b];
          M(l[a], l[b]) += ktilde[cell] * me[a][b];
        }
    }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  if (es.info() != Eigen::Success) throw std::runtime_error("local eigensolve failed");

  LocalEig out;
  out.values = es.eigenvalues().head(count);
  out.vectors = es.eigenvectors().leftCols(count);
  for (int c = 0; c < count; ++c) {
    int imax;
    out.vectors.col(c).cwiseAbs().maxCoeff(&imax);
    if (out.vectors(imax, c) < 0.0) out.vectors.col(c) *= -1.0;
  }
  return out;
}

CoarseSpace build_coarse_space(const CoarseGrid& cg, const PermeabilityField& k, int L_interior) {
  if (L_interior < 1) throw std::invalid_argument("L_interior must be >= 1");
  const FineGrid& fg = cg.fine;
  const PartitionOfUnity pou = solve_pou(cg, k);
  const Eigen::VectorXd kt = ktilde_weight(cg, k, pou);

  CoarseSpace vs;
  vs.node_eigenvalues.resize(cg.num_nodes());
  std::vector<Eigen::Triplet<double>> trips;
  for (int cn = 0; cn < cg.num_nodes(); ++cn) {
    const int I = cg.node_I(cn), J = cg.node_J(cn);
    const bool boundary = (I == 0 || I == cg.NX || J == 0 || J == cg.NY);
    const int anchor = cg.anchor_fine_node(cn);
    if (boundary) {
      const int dof = static_cast<int>(vs.dof_node.size());
      vs.dof_node.push_back(cn);
      vs.dof_level.push_back(1);
      vs.dof_anchor.push_back(anchor);
      const Eigen::VectorXd& chi = pou.chi[cn];
      for (int gn = 0; gn < fg.num_nodes(); ++gn)
        if (chi[gn] != 0.0) trips.emplace_back(gn, dof, chi[gn]);
      continue;
    }
    const Neighborhood nb = neighborhood(cg, cn);
    const LocalEig eig = local_eig(nb, fg, k, kt, L_interior);
    vs.node_eigenvalues[cn] = eig.values;
    const Eigen::VectorXd& chi = pou.chi[cn];
    for (int l = 0; l < L_interior; ++l) {
      const int dof = static_cast<int>(vs.dof_node.size());
      vs.dof_node.push_back(cn);
      vs.dof_level.push_back(l + 1);
      vs.dof_anchor.push_back(anchor);
      for (int ln = 0; ln < static_cast<int>(nb.fine_nodes.size()); ++ln) {
        const int gn = nb.fine_nodes[ln];
        const double v = chi[gn] * eig.vectors(ln, l);
        if (v != 0.0) trips.emplace_back(gn, dof, v);
      }
    }
  }
  vs.R.resize(fg.num_nodes(), static_cast<int>(vs.dof_node.size()));
  vs.R.setFromTriplets(trips.begin(), trips.end());
  return vs;
}

CoarseSpace CoarseSpace::truncated(int L) const {
  CoarseSpace out;
  std::vector<int> keep;
  for (int d = 0; d < dim(); ++d)
    if (dof_level[d] <= L) keep.push_back(d);
  out.R.resize(R.rows(), static_cast<int>(keep.size()));
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < static_cast<int>(keep.size()); ++c) {
    out.dof_node.push_back(dof_node[keep[c]]);
    out.dof_level.push_back(dof_level[keep[c]]);
    out.dof_anchor.push_back(dof_anchor[keep[c]]);
    for (Eigen::SparseMatrix<double>::InnerIterator it(R, keep[c]); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), c, it.value());
  }
  out.R.setFromTriplets(trips.begin(), trips.end());
  out.node_eigenvalues = node_eigenvalues;
  return out;
}

CoarseSpace identity_space(const FineGrid& fg) {
  CoarseSpace vs;
  const int n = fg.num_nodes();
  vs.R.resize(n, n);
  vs.R.setIdentity();
  vs.dof_node.resize(n);
  vs.dof_level.assign(n, 1);
  vs.dof_anchor.resize(n);
  for (int i = 0; i < n; ++i) vs.dof_node[i] = vs.dof_anchor[i] = i;
  return vs;
}

}  // namespace msfv

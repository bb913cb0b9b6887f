#include <doctest.h>

#include "msfv/assembly.hpp"
#include "msfv/basis.hpp"
#include "msfv/downscale.hpp"
#include "msfv/saddle.hpp"

using namespace msfv;

namespace {

struct Setup {
  FineGrid fg;
  CoarseGrid cg;
  PermeabilityField k;
  SourceField src;
  BoundaryConditions bc;
  std::vector<ControlVolume> vols;
  PressureSolution coarse;
};

Setup make(int n, int N, double contrast, int L, unsigned seed) {
  Setup s;
  s.fg = build_fine_grid(n, n);
  s.cg = build_coarse_grid(s.fg, N, N);
  s.k = contrast == 1.0
            ? PermeabilityField{Eigen::VectorXd::Ones(s.fg.num_cells())}
            : gen_channel_field(s.fg, 1.0, contrast, default_geometry(s.fg, seed));
  s.src = SourceField::zero(s.fg);
  s.bc = BoundaryConditions::pressure_drop(1.0, 0.0);
  const SpMat A = assemble_stiffness(s.fg, s.k.k);
  const Eigen::VectorXd b = assemble_load(s.fg, s.src, s.bc);
  s.vols = coarse_control_volumes(s.cg);
  const ConstraintSystem cons = assemble_constraints(s.fg, s.k.k, s.vols, s.src, s.bc);
  const CoarseSpace sp = build_coarse_space(s.cg, s.k, L);
  const KktSystem sys = project(A, b, cons, (int)s.vols.size(), sp, s.fg, s.bc);
  s.coarse = solve_kkt(sys);
  return s;
}

}  // namespace

TEST_CASE("homogeneous downscale: exact uniform flux and conservation") {
  Setup s = make(8, 4, 1.0, 2, 1);
  const FluxField flux = downscale_all(s.coarse.p, s.cg, s.k.k, s.src, s.bc, s.vols);
  // p = 1 - x: every x-face carries h_y per unit length, y-faces nothing.
  for (int j = 0; j <= s.fg.ny; ++j)
    for (int i = 0; i < s.fg.nx; ++i) {
      const double len = (j == 0 || j == s.fg.ny) ? 0.5 * s.fg.hy : s.fg.hy;
      CHECK(flux.fx[s.fg.x_edge(i, j)] == doctest::Approx(len).epsilon(1e-10));
    }
  for (int j = 0; j < s.fg.ny; ++j)
    for (int i = 0; i <= s.fg.nx; ++i)
      CHECK(flux.fy[s.fg.y_edge(i, j)] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(conservation_residual(s.fg, flux, s.src) < 1e-12);
}

TEST_CASE("heterogeneous downscale conserves on every fine dual volume") {
  for (int L : {1, 3}) {
    Setup s = make(20, 4, 1e4, L, 2);
    const FluxField flux = downscale_all(s.coarse.p, s.cg, s.k.k, s.src, s.bc, s.vols);
    CHECK(conservation_residual(s.fg, flux, s.src) < 1e-9);
  }
}

TEST_CASE("downscale at r=1 reproduces the fine FV flux field") {
  const FineGrid fg = build_fine_grid(8, 8);
  const CoarseGrid cg = build_coarse_grid(fg, 8, 8);
  const PermeabilityField k = gen_channel_field(fg, 1.0, 100.0, default_geometry(fg, 3));
  const SourceField src = SourceField::zero(fg);
  const auto bc = BoundaryConditions::pressure_drop(1.0, 0.0);
  const PressureSolution fv = solve_fine_fv(fg, k.k, src, bc);
  const FluxField direct = fine_flux_field(fg, k.k, fv.p, src, bc);
  const auto vols = coarse_control_volumes(cg);
  const FluxField down = downscale_all(fv.p, cg, k.k, src, bc, vols);
  CHECK((down.fx - direct.fx).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((down.fy - direct.fy).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("downscaling rejects non-conservative coarse input") {
  Setup s = make(16, 4, 1e3, 2, 4);
  const SpMat A = assemble_stiffness(s.fg, s.k.k);
  const Eigen::VectorXd b = assemble_load(s.fg, s.src, s.bc);
  const ConstraintSystem cons = assemble_constraints(s.fg, s.k.k, s.vols, s.src, s.bc);
  const CoarseSpace sp = build_coarse_space(s.cg, s.k, 2);
  const KktSystem sys = project(A, b, cons, (int)s.vols.size(), sp, s.fg, s.bc);
  const PressureSolution gal = solve_galerkin(sys);
  CHECK_THROWS_WITH_AS(
      (void)downscale_all(gal.p, s.cg, s.k.k, s.src, s.bc, s.vols),
      doctest::Contains("incompatible Neumann"), std::runtime_error);
}

TEST_CASE("net_outflux uses outward orientation on every side") {
  const FineGrid fg = build_fine_grid(2, 2);
  FluxField f = FluxField::zero(fg);
  f.bleft[1] = 2.0;   // outward through x=0 at node (0,1)
  f.fx[fg.x_edge(0, 1)] = 3.0;
  CHECK(f.net_outflux(0, 1) == doctest::Approx(5.0));
  f.fx[fg.x_edge(1, 1)] = 3.0;
  CHECK(f.net_outflux(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("fine flux field closes Dirichlet faces by the volume balance") {
  const FineGrid fg = build_fine_grid(10, 10);
  const PermeabilityField k = gen_channel_field(fg, 1.0, 50.0, default_geometry(fg, 5));
  SourceField src = SourceField::zero(fg);
  src.q = Eigen::VectorXd::Constant(fg.num_cells(), 0.25);
  const auto bc = BoundaryConditions::pressure_drop(1.0, 0.0);
  const PressureSolution fv = solve_fine_fv(fg, k.k, src, bc);
  const FluxField flux = fine_flux_field(fg, k.k, fv.p, src, bc);
  CHECK(conservation_residual(fg, flux, src) < 1e-10);
}

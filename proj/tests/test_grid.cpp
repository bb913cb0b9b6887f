#include <doctest.h>

#include <cmath>
#include <set>

#include "msfv/grid.hpp"

using namespace msfv;

TEST_CASE("fine grid index maps round-trip") {
  const FineGrid fg = build_fine_grid(5, 3);
  CHECK(fg.hx == doctest::Approx(0.2));
  CHECK(fg.hy == doctest::Approx(1.0 / 3.0));
  CHECK(fg.num_nodes() == 24);
  CHECK(fg.num_cells() == 15);
  for (int j = 0; j <= 3; ++j)
    for (int i = 0; i <= 5; ++i) {
      const int n = fg.node(i, j);
      CHECK(fg.node_i(n) == i);
      CHECK(fg.node_j(n) == j);
    }
  CHECK_THROWS(build_fine_grid(1, 4));
}

TEST_CASE("coarse grid requires divisible refinement") {
  const FineGrid fg = build_fine_grid(6, 6);
  const CoarseGrid cg = build_coarse_grid(fg, 3, 2);
  CHECK(cg.rx == 2);
  CHECK(cg.ry == 3);
  CHECK(cg.anchor_fine_node(cg.node(1, 1)) == fg.node(2, 3));
  CHECK_THROWS(build_coarse_grid(fg, 4, 2));
}

TEST_CASE("nearest-node assignment: centered for odd r, ties up for even r") {
  // r = 3: fine node i belongs to coarse index round(i/3).
  CHECK(CoarseGrid::assign(0, 3) == 0);
  CHECK(CoarseGrid::assign(1, 3) == 0);
  CHECK(CoarseGrid::assign(2, 3) == 1);
  CHECK(CoarseGrid::assign(4, 3) == 1);
  // r = 2: the midpoint node 1 ties and goes up.
  CHECK(CoarseGrid::assign(0, 2) == 0);
  CHECK(CoarseGrid::assign(1, 2) == 1);
  CHECK(CoarseGrid::assign(2, 2) == 1);
  CHECK(CoarseGrid::assign(3, 2) == 2);
}

TEST_CASE("neighborhood cell counts: interior 4, edge 2, corner 1") {
  const FineGrid fg = build_fine_grid(6, 6);
  const CoarseGrid cg = build_coarse_grid(fg, 3, 3);
  CHECK(neighborhood(cg, cg.node(1, 1)).coarse_cells.size() == 4);
  CHECK(neighborhood(cg, cg.node(0, 1)).coarse_cells.size() == 2);
  CHECK(neighborhood(cg, cg.node(3, 3)).coarse_cells.size() == 1);
  const Neighborhood nb = neighborhood(cg, cg.node(1, 1));
  CHECK(nb.fine_nodes.size() == size_t(5 * 5));
}

TEST_CASE("fine volume measures tile the domain") {
  const FineGrid fg = build_fine_grid(4, 7);
  double total = 0.0;
  for (int j = 0; j <= fg.ny; ++j)
    for (int i = 0; i <= fg.nx; ++i) total += fine_volume_measure(fg, i, j);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  // Interior volume is h^2; corners are quarter cells.
  CHECK(fine_volume_measure(fg, 2, 3) == doctest::Approx(fg.hx * fg.hy));
  CHECK(fine_volume_measure(fg, 0, 0) == doctest::Approx(0.25 * fg.hx * fg.hy));
}

TEST_CASE("coarse volumes are exact unions of their fine volumes") {
  for (int r : {1, 2, 3, 5}) {
    const FineGrid fg = build_fine_grid(3 * r, 3 * r);
    const CoarseGrid cg = build_coarse_grid(fg, 3, 3);
    const auto coarse = coarse_control_volumes(cg);
    REQUIRE(coarse.size() == size_t(cg.num_nodes()));
    double total = 0.0;
    std::set<int> seen;
    for (const ControlVolume& cv : coarse) {
      total += cv.measure;
      double member_sum = 0.0;
      for (int n : cv.fine_nodes) {
        CHECK(seen.insert(n).second);  // disjoint across volumes
        member_sum += fine_volume_measure(fg, fg.node_i(n), fg.node_j(n));
      }
      CHECK(cv.measure == doctest::Approx(member_sum).epsilon(1e-13));
      // Every member node's nearest coarse node is the owner.
      for (int n : cv.fine_nodes) {
        CHECK(CoarseGrid::assign(fg.node_i(n), r) == cg.node_I(cv.owner));
        CHECK(CoarseGrid::assign(fg.node_j(n), r) == cg.node_J(cv.owner));
      }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(seen.size() == size_t(fg.num_nodes()));
  }
}

TEST_CASE("control volume boundaries close: piece lengths match the perimeter") {
  const FineGrid fg = build_fine_grid(6, 6);
  const CoarseGrid cg = build_coarse_grid(fg, 3, 3);
  for (const ControlVolume& cv : coarse_control_volumes(cg)) {
    // Outward-flux of the linear field v=x equals the net x-extent
    // integral: for a closed polygon, sum of sign*len over axis-0 pieces
    // of any constant vector field must vanish.
    double net0 = 0.0, net1 = 0.0;
    for (const BoundaryPiece& bp : cv.boundary) {
      if (bp.axis == 0) net0 += bp.sign * bp.len;
      else net1 += bp.sign * bp.len;
    }
    CHECK(net0 == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(net1 == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("singleton coarse volumes coincide with fine volumes at r=1") {
  const FineGrid fg = build_fine_grid(4, 4);
  const CoarseGrid cg = build_coarse_grid(fg, 4, 4);
  const auto coarse = coarse_control_volumes(cg);
  const auto fine = fine_control_volumes(fg);
  REQUIRE(coarse.size() == fine.size());
  for (size_t v = 0; v < coarse.size(); ++v) {
    CHECK(coarse[v].measure == doctest::Approx(fine[v].measure));
    CHECK(coarse[v].fine_nodes == fine[v].fine_nodes);
  }
}

#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "msfv/field.hpp"

using namespace msfv;

TEST_CASE("field save/load round-trips exactly") {
  const FineGrid fg = build_fine_grid(4, 3);
  PermeabilityField f = gen_channel_field(fg, 1.0, 1e4, default_geometry(fg, 3));
  const std::string path = "roundtrip_field.txt";
  save_field(path, fg, f.k);
  const PermeabilityField g = load_field(path, fg);
  CHECK((f.k - g.k).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("load_field rejects bad input") {
  const FineGrid fg = build_fine_grid(3, 3);
  {
    std::ofstream out("short_field.txt");
    out << "1 2 3\n";
  }
  CHECK_THROWS(load_field("short_field.txt", fg));
  {
    std::ofstream out("neg_field.txt");
    for (int i = 0; i < 9; ++i) out << (i == 4 ? -1.0 : 1.0) << "\n";
  }
  CHECK_THROWS(load_field("neg_field.txt", fg));
  CHECK_THROWS(load_field("no_such_file.txt", fg));
  std::remove("short_field.txt");
  std::remove("neg_field.txt");
}

TEST_CASE("generated field: contrast, positivity, determinism") {
  const FineGrid fg = build_fine_grid(40, 40);
  const PermeabilityField a = gen_channel_field(fg, 1.0, 1e4, default_geometry(fg, 7));
  const PermeabilityField b = gen_channel_field(fg, 1.0, 1e4, default_geometry(fg, 7));
  CHECK((a.k - b.k).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.kmin() == doctest::Approx(1.0));
  CHECK(a.contrast() == doctest::Approx(1e4));
  const PermeabilityField c = gen_channel_field(fg, 1.0, 1e4, default_geometry(fg, 8));
  CHECK((a.k - c.k).cwiseAbs().maxCoeff() > 0.0);  // seed changes placement
}

TEST_CASE("channels span the full width") {
  const FineGrid fg = build_fine_grid(30, 30);
  const PermeabilityField f = gen_channel_field(fg, 1.0, 100.0, default_geometry(fg, 1));
  // Channel rows at 0.2/0.5/0.8 of ny.
  for (int i = 0; i < fg.nx; ++i) CHECK(f.k[fg.cell(i, 6)] == doctest::Approx(100.0));
}

TEST_CASE("gen_channel_field validates inputs") {
  const FineGrid fg = build_fine_grid(4, 4);
  CHECK_THROWS(gen_channel_field(fg, -1.0, 10.0, {}));
  CHECK_THROWS(gen_channel_field(fg, 1.0, 0.5, {}));
  CHECK_THROWS(gen_channel_field(fg, 1.0, 10.0, {{Feature::Kind::Inclusion, 3, 2, 0, 0}}));
}

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msfv/sim.hpp"

using namespace msfv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimConfig small_two_phase(const std::string& out_dir) {
  SimConfig cfg;
  cfg.nx = cfg.ny = 20;
  cfg.NX = cfg.NY = 4;
  cfg.background = 1e-3;
  cfg.contrast = 1e3;
  cfg.seed = 1;
  cfg.L = 2;
  cfg.dt = 1e-3;
  cfg.steps_per_solve = 10;
  cfg.t_final = 0.05;
  cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_CASE("config file parsing with comments and overrides") {
  const std::string path = "sim_test.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "nx = 30\n"
        << "ny=20   # trailing comment\n"
        << "mode=galerkin-unconstrained\n"
        << "levels=1,3,5\n"
        << "snapshot_times=0.1,0.2\n";
  }
  SimConfig cfg = load_config(path);
  CHECK(cfg.nx == 30);
  CHECK(cfg.ny == 20);
  CHECK(cfg.mode == SolverMode::GalerkinUnconstrained);
  CHECK(cfg.sweep_levels() == std::vector<int>{1, 3, 5});
  CHECK(cfg.snapshots() == std::vector<double>{0.1, 0.2});
  apply_override(cfg, "mode", "fine-fv");
  CHECK(cfg.mode == SolverMode::FineFv);
  CHECK_THROWS(apply_override(cfg, "no_such_key", "1"));
  CHECK_THROWS(parse_mode("bogus"));
  std::remove(path.c_str());
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.t_final = -1.0;
  CHECK_THROWS(cfg.validate());
  cfg = SimConfig{};
  cfg.steps_per_solve = 0;
  CHECK_THROWS(cfg.validate());
  cfg = SimConfig{};
  cfg.dt = 0.0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("default snapshot times are 0.3/0.6/0.9 of t_final") {
  SimConfig cfg;
  cfg.t_final = 2.0;
  const auto st = cfg.snapshots();
  REQUIRE(st.size() == 3);
  CHECK(st[0] == doctest::Approx(0.6));
  CHECK(st[2] == doctest::Approx(1.8));
}

TEST_CASE("single-phase homogeneous run reports zero errors") {
  SimConfig cfg;
  cfg.nx = cfg.ny = 16;
  cfg.NX = cfg.NY = 4;
  cfg.contrast = 1.0;
  cfg.levels = {1, 2};
  cfg.out_dir = "sim_out_hom";
  const RunRecord rec = run_single_phase(cfg);
  REQUIRE(rec.reports.size() == 2);
  for (const auto& r : rec.reports) {
    CHECK(r.l2k_pct < 1e-8);
    CHECK(r.h1k_pct < 1e-8);
  }
  CHECK(rec.max_conservation_residual < 1e-12);
  CHECK(std::filesystem::exists("sim_out_hom/pressure_errors.csv"));
  CHECK(std::filesystem::exists("sim_out_hom/pressure_fine.txt"));
  std::filesystem::remove_all("sim_out_hom");
}

TEST_CASE("fine-fv mode notes that enrichment is ignored") {
  SimConfig cfg;
  cfg.nx = cfg.ny = 12;
  cfg.NX = cfg.NY = 3;
  cfg.contrast = 10.0;
  cfg.mode = SolverMode::FineFv;
  cfg.out_dir = "sim_out_fv";
  const RunRecord rec = run_single_phase(cfg);
  bool noted = false;
  for (const auto& n : rec.notes) noted = noted || n.find("ignored") != std::string::npos;
  CHECK(noted);
  std::filesystem::remove_all("sim_out_fv");
}

TEST_CASE("two-phase bookkeeping: solves, clock, checkpoints") {
  SimConfig cfg = small_two_phase("sim_out_tp");
  const RunRecord rec = run_two_phase(cfg);
  // 50 steps at 10 per solve -> 5 pressure solves, 6 checkpoints.
  CHECK(rec.pressure_solves == 5);
  REQUIRE(rec.checkpoint_times.size() == 6);
  CHECK(rec.checkpoint_times.front() == doctest::Approx(0.0));
  CHECK(rec.checkpoint_times.back() == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(rec.max_conservation_residual < 1e-9);
  CHECK(rec.snapshot_files.size() == 3);
  std::filesystem::remove_all("sim_out_tp");
}

TEST_CASE("identical configs give bitwise-identical snapshots") {
  SimConfig a = small_two_phase("sim_out_da");
  SimConfig b = small_two_phase("sim_out_db");
  const RunRecord ra = run_two_phase(a);
  const RunRecord rb = run_two_phase(b);
  REQUIRE(ra.snapshot_files.size() == rb.snapshot_files.size());
  for (size_t i = 0; i < ra.snapshot_files.size(); ++i)
    CHECK(slurp(ra.snapshot_files[i]) == slurp(rb.snapshot_files[i]));
  std::filesystem::remove_all("sim_out_da");
  std::filesystem::remove_all("sim_out_db");
}

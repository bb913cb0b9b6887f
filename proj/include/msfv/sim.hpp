#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "msfv/metrics.hpp"
#include "msfv/transport.hpp"

namespace msfv {

enum class SolverMode { FineFv, GmsfemFv, GalerkinUnconstrained };

SolverMode parse_mode(const std::string& name);
std::string mode_name(SolverMode mode);

/// Flat key=value run configuration; every key has a CLI flag mirror.
struct SimConfig {
  int nx = 100, ny = 100;
  int NX = 10, NY = 10;
  std::string field_file;      // empty -> synthetic field below
  double background = 1.0;
  double contrast = 1e4;
  unsigned seed = 1;
  int L = 2;                   // interior enrichment level
  std::vector<int> levels;     // sweep levels; falls back to {L}
  double p_left = 1.0;
  double p_right = 0.0;
  FluidProps fluid;
  double dt = 1e-4;
  int steps_per_solve = 100;
  double t_final = 0.9;
  std::vector<double> snapshot_times;  // default {0.3, 0.6, 0.9} * t_final
  double inflow_sat = 1.0;
  SolverMode mode = SolverMode::GmsfemFv;
  std::string out_dir = "out";

  std::vector<int> sweep_levels() const { return levels.empty() ? std::vector<int>{L} : levels; }
  std::vector<double> snapshots() const;
  void validate() const;
  std::string echo() const;
};

SimConfig load_config(const std::string& path);
void apply_override(SimConfig& cfg, const std::string& key, const std::string& value);

struct RunRecord {
  std::string config_echo;
  std::vector<ErrorReport> reports;            // one per level (single phase)
  std::vector<double> checkpoint_times;        // pressure-solve boundaries (two phase)
  std::vector<Eigen::VectorXd> checkpoints;    // saturation at those times
  std::vector<std::string> snapshot_files;
  double max_conservation_residual = 0.0;
  std::map<std::string, double> timings;       // seconds per phase
  int pressure_solves = 0;
  bool failed = false;
  std::vector<std::string> notes;
};

/// Single-phase pressure experiment: fine reference plus one coarse solve
/// per sweep level, error CSV and solution dumps under cfg.out_dir.
RunRecord run_single_phase(const SimConfig& cfg);

/// Two-phase IMPES driver: pressure solve -> downscale -> N transport
/// steps, repeated to t_final. Saturation snapshots land in cfg.out_dir.
RunRecord run_two_phase(const SimConfig& cfg);

void write_error_csv(const std::string& path, const std::vector<ErrorReport>& reports);
void write_run_record(const std::string& path, const RunRecord& rec);

}  // namespace msfv

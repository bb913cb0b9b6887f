#include "msfv/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "msfv/assembly.hpp"
#include "msfv/basis.hpp"
#include "msfv/downscale.hpp"
#include "msfv/saddle.hpp"

namespace msfv {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

class PhaseTimer {
 public:
  explicit PhaseTimer(std::map<std::string, double>& sink) : sink_(sink) {}

  template <class F>
  auto time(const std::string& phase, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      sink_[phase] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } else {
      auto r = f();
      sink_[phase] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return r;
    }
  }

 private:
  std::map<std::string, double>& sink_;
};

struct Problem {
  FineGrid fg;
  CoarseGrid cg;
  PermeabilityField field;
  SourceField src;
  BoundaryConditions bc;
  std::vector<ControlVolume> coarse_volumes;
};

Problem setup(const SimConfig& cfg) {
  Problem p;
  p.fg = build_fine_grid(cfg.nx, cfg.ny);
  p.cg = build_coarse_grid(p.fg, cfg.NX, cfg.NY);
  if (cfg.field_file.empty())
    p.field = gen_channel_field(p.fg, cfg.background, cfg.contrast,
                                default_geometry(p.fg, cfg.seed));
  else
    p.field = load_field(cfg.field_file, p.fg);
  p.src = SourceField::zero(p.fg);
  p.bc = BoundaryConditions::pressure_drop(cfg.p_left, cfg.p_right);
  p.coarse_volumes = coarse_control_volumes(p.cg);
  return p;
}

struct PressureOutput {
  PressureSolution sol;
  FluxField flux;
  double residual = 0.0;
};

// One pressure solve with cell coefficient k*Lambda, flux recovery per
// mode: fine FV and downscaled GMsFEM fluxes are conservative, straight
// FE evaluation of the unconstrained Galerkin solution is not.
PressureOutput solve_pressure(SolverMode mode, const Problem& pr, const Eigen::VectorXd& coeff,
                              const CoarseSpace* space, PhaseTimer& timer) {
  PressureOutput out;
  if (mode == SolverMode::FineFv) {
    out.sol = timer.time("solve", [&] { return solve_fine_fv(pr.fg, coeff, pr.src, pr.bc); });
    out.flux = timer.time("downscale",
                          [&] { return fine_flux_field(pr.fg, coeff, out.sol.p, pr.src, pr.bc); });
  } else {
    const KktSystem sys = timer.time("assembly", [&] {
      const SpMat A = assemble_stiffness(pr.fg, coeff);
      const Eigen::VectorXd b = assemble_load(pr.fg, pr.src, pr.bc);
      const ConstraintSystem cons =
          assemble_constraints(pr.fg, coeff, pr.coarse_volumes, pr.src, pr.bc);
      return project(A, b, cons, static_cast<int>(pr.coarse_volumes.size()), *space, pr.fg, pr.bc);
    });
    out.sol = timer.time("solve", [&] {
      return mode == SolverMode::GmsfemFv ? solve_kkt(sys) : solve_galerkin(sys);
    });
    out.flux = timer.time("downscale", [&] {
      return mode == SolverMode::GmsfemFv
                 ? downscale_all(out.sol.p, pr.cg, coeff, pr.src, pr.bc, pr.coarse_volumes)
                 : fine_flux_field(pr.fg, coeff, out.sol.p, pr.src, pr.bc);
    });
  }
  out.residual = conservation_residual(pr.fg, out.flux, pr.src);
  return out;
}

std::string format_time_tag(double t) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << t;
  return os.str();
}

}  // namespace

SolverMode parse_mode(const std::string& name) {
  if (name == "fine-fv") return SolverMode::FineFv;
  if (name == "gmsfem-fv") return SolverMode::GmsfemFv;
  if (name == "galerkin-unconstrained") return SolverMode::GalerkinUnconstrained;
  throw std::invalid_argument("unknown solver mode: " + name);
}

std::string mode_name(SolverMode mode) {
  switch (mode) {
    case SolverMode::FineFv: return "fine-fv";
    case SolverMode::GmsfemFv: return "gmsfem-fv";
    case SolverMode::GalerkinUnconstrained: return "galerkin-unconstrained";
  }
  return "?";
}

std::vector<double> SimConfig::snapshots() const {
  if (!snapshot_times.empty()) {
    auto s = snapshot_times;
    std::sort(s.begin(), s.end());
    return s;
  }
  return {0.3 * t_final, 0.6 * t_final, 0.9 * t_final};
}

void SimConfig::validate() const {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid must have at least 2 cells per axis");
  if (t_final <= 0.0) throw std::invalid_argument("t_final must be positive");
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (steps_per_solve < 1) throw std::invalid_argument("steps_per_solve must be at least 1");
  if (L < 1) throw std::invalid_argument("enrichment level must be at least 1");
  if (fluid.mu_w <= 0.0 || fluid.mu_o <= 0.0)
    throw std::invalid_argument("viscosities must be positive");
}

std::string SimConfig::echo() const {
  std::ostringstream os;
  os << "nx=" << nx << "\nny=" << ny << "\nNX=" << NX << "\nNY=" << NY << "\n";
  os << "field_file=" << field_file << "\nbackground=" << background << "\ncontrast=" << contrast
     << "\nseed=" << seed << "\n";
  os << "L=" << L << "\nlevels=";
  const auto lv = sweep_levels();
  for (size_t i = 0; i < lv.size(); ++i) os << (i ? "," : "") << lv[i];
  os << "\np_left=" << p_left << "\np_right=" << p_right << "\n";
  os << "mu_w=" << fluid.mu_w << "\nmu_o=" << fluid.mu_o << "\n";
  os << "dt=" << dt << "\nsteps_per_solve=" << steps_per_solve << "\nt_final=" << t_final << "\n";
  os << "snapshot_times=";
  const auto st = snapshots();
  for (size_t i = 0; i < st.size(); ++i) os << (i ? "," : "") << st[i];
  os << "\ninflow_sat=" << inflow_sat << "\nmode=" << mode_name(mode) << "\nout_dir=" << out_dir
     << "\n";
  return os.str();
}

void apply_override(SimConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "nx") cfg.nx = std::stoi(value);
  else if (key == "ny") cfg.ny = std::stoi(value);
  else if (key == "NX") cfg.NX = std::stoi(value);
  else if (key == "NY") cfg.NY = std::stoi(value);
  else if (key == "field_file") cfg.field_file = value;
  else if (key == "background") cfg.background = std::stod(value);
  else if (key == "contrast") cfg.contrast = std::stod(value);
  else if (key == "seed") cfg.seed = static_cast<unsigned>(std::stoul(value));
  else if (key == "L") cfg.L = std::stoi(value);
  else if (key == "levels") {
    cfg.levels.clear();
    for (const auto& tok : split(value, ',')) cfg.levels.push_back(std::stoi(tok));
  } else if (key == "p_left") cfg.p_left = std::stod(value);
  else if (key == "p_right") cfg.p_right = std::stod(value);
  else if (key == "mu_w") cfg.fluid.mu_w = std::stod(value);
  else if (key == "mu_o") cfg.fluid.mu_o = std::stod(value);
  else if (key == "dt") cfg.dt = std::stod(value);
  else if (key == "steps_per_solve") cfg.steps_per_solve = std::stoi(value);
  else if (key == "t_final") cfg.t_final = std::stod(value);
  else if (key == "snapshot_times") {
    cfg.snapshot_times.clear();
    for (const auto& tok : split(value, ',')) cfg.snapshot_times.push_back(std::stod(tok));
  } else if (key == "inflow_sat") cfg.inflow_sat = std::stod(value);
  else if (key == "mode") cfg.mode = parse_mode(value);
  else if (key == "out_dir") cfg.out_dir = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    const auto vb = value.find_first_not_of(" \t");
    value = (vb == std::string::npos) ? "" : value.substr(vb);
    apply_override(cfg, key, value);
  }
  return cfg;
}

void write_error_csv(const std::string& path, const std::vector<ErrorReport>& reports) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "Nc,dimV0,Mc,L2k_pct,H1k_pct\n";
  out.precision(10);
  for (const ErrorReport& r : reports)
    out << r.Nc << "," << r.dim_v0 << "," << r.Mc << "," << r.l2k_pct << "," << r.h1k_pct << "\n";
}

void write_run_record(const std::string& path, const RunRecord& rec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# run record\n" << rec.config_echo;
  out.precision(12);
  out << "pressure_solves=" << rec.pressure_solves << "\n";
  out << "max_conservation_residual=" << rec.max_conservation_residual << "\n";
  out << "failed=" << (rec.failed ? 1 : 0) << "\n";
  for (const auto& [phase, sec] : rec.timings) out << "time_" << phase << "=" << sec << "\n";
  for (const auto& note : rec.notes) out << "note=" << note << "\n";
  for (size_t i = 0; i < rec.reports.size(); ++i) {
    const ErrorReport& r = rec.reports[i];
    out << "report" << i << "=Nc:" << r.Nc << " dimV0:" << r.dim_v0 << " Mc:" << r.Mc
        << " L2k%:" << r.l2k_pct << " H1k%:" << r.h1k_pct << "\n";
  }
  for (const auto& f : rec.snapshot_files) out << "snapshot=" << f << "\n";
}

RunRecord run_single_phase(const SimConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  RunRecord rec;
  rec.config_echo = cfg.echo();
  PhaseTimer timer(rec.timings);
  const Problem pr = setup(cfg);
  const Eigen::VectorXd coeff = pr.field.k;  // Lambda = 1, single phase

  // Fine reference: classical vertex-centered FV.
  const PressureOutput ref = solve_pressure(SolverMode::FineFv, pr, coeff, nullptr, timer);
  rec.max_conservation_residual = ref.residual;
  rec.pressure_solves = 1;
  save_grid_values(cfg.out_dir + "/pressure_fine.txt", pr.fg.nx + 1, ref.sol.p);

  if (cfg.mode == SolverMode::FineFv) {
    rec.notes.push_back("mode fine-fv: enrichment settings ignored");
    ErrorReport r = relative_errors(pr.fg, ref.sol.p, ref.sol.p, pr.field);
    r.Nc = ref.sol.reported_size;
    r.dim_v0 = pr.fg.num_nodes();
    r.Mc = ref.sol.reported_size - pr.fg.num_nodes();
    rec.reports.push_back(r);
  } else {
    const auto levels = cfg.sweep_levels();
    const int max_level = *std::max_element(levels.begin(), levels.end());
    const CoarseSpace full =
        timer.time("basis", [&] { return build_coarse_space(pr.cg, pr.field, max_level); });
    for (int level : levels) {
      const CoarseSpace space = full.truncated(level);
      const PressureOutput out = solve_pressure(cfg.mode, pr, coeff, &space, timer);
      ++rec.pressure_solves;
      rec.max_conservation_residual = std::max(rec.max_conservation_residual, out.residual);
      ErrorReport r = relative_errors(pr.fg, ref.sol.p, out.sol.p, pr.field);
      r.Nc = out.sol.reported_size;
      r.dim_v0 = space.dim();
      r.Mc = out.sol.reported_size - space.dim();
      rec.reports.push_back(r);
      save_grid_values(cfg.out_dir + "/pressure_L" + std::to_string(level) + ".txt",
                       pr.fg.nx + 1, out.sol.p);
    }
  }
  write_error_csv(cfg.out_dir + "/pressure_errors.csv", rec.reports);
  write_run_record(cfg.out_dir + "/run_record.txt", rec);
  return rec;
}

RunRecord run_two_phase(const SimConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  RunRecord rec;
  rec.config_echo = cfg.echo();
  PhaseTimer timer(rec.timings);
  const Problem pr = setup(cfg);

  CoarseSpace space;
  if (cfg.mode != SolverMode::FineFv) {
    // The spectral basis depends on k only; it is built once and reused
    // while the mobility evolves.
    space = timer.time("basis", [&] { return build_coarse_space(pr.cg, pr.field, cfg.L); });
  } else {
    rec.notes.push_back("mode fine-fv: enrichment settings ignored");
  }

  const long total_steps = std::lround(cfg.t_final / cfg.dt);
  auto snap_times = cfg.snapshots();
  size_t next_snap = 0;

  SaturationState state = SaturationState::zero(pr.fg);
  rec.checkpoint_times.push_back(state.t);
  rec.checkpoints.push_back(state.S);

  long step = 0;
  while (step < total_steps) {
    const Eigen::VectorXd coeff =
        pr.field.k.cwiseProduct(cell_mobility(pr.fg, state.S, cfg.fluid));
    const PressureOutput out = solve_pressure(cfg.mode, pr, coeff,
                                              cfg.mode == SolverMode::FineFv ? nullptr : &space,
                                              timer);
    ++rec.pressure_solves;
    rec.max_conservation_residual = std::max(rec.max_conservation_residual, out.residual);

    const long block = std::min<long>(cfg.steps_per_solve, total_steps - step);
    timer.time("transport", [&] {
      for (long s = 0; s < block; ++s) {
        state = advance_saturation(pr.fg, state, out.flux, pr.src.qw, cfg.dt, cfg.inflow_sat,
                                   cfg.fluid);
        while (next_snap < snap_times.size() && snap_times[next_snap] <= state.t + 0.5 * cfg.dt) {
          const std::string file = cfg.out_dir + "/saturation_" + mode_name(cfg.mode) + "_L" +
                                   std::to_string(cfg.L) + "_t" + format_time_tag(state.t) +
                                   ".txt";
          save_grid_values(file, pr.fg.nx + 1, state.S);
          rec.snapshot_files.push_back(file);
          ++next_snap;
        }
      }
    });
    step += block;
    rec.checkpoint_times.push_back(state.t);
    rec.checkpoints.push_back(state.S);
  }
  write_run_record(cfg.out_dir + "/run_record.txt", rec);
  return rec;
}

}  // namespace msfv

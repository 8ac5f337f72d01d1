#include "wnwe/runner.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "wnwe/error.hpp"
#include "wnwe/snapshot.hpp"

#ifndef WNWE_VERSION
#define WNWE_VERSION "0.0.0"
#endif

namespace wnwe {

namespace {

namespace fs = std::filesystem;

bool is_run_output(const fs::path& p) {
  const std::string name = p.filename().string();
  return name == "run.meta" || name == "diagnostics.csv" ||
         (name.starts_with("snap_") && name.ends_with(".csv"));
}

void prepare_out_dir(const fs::path& dir, bool force) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
  std::vector<fs::path> existing;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_run_output(entry.path())) existing.push_back(entry.path());
  }
  if (existing.empty()) return;
  if (!force) {
    throw IoError("output directory '" + dir.string() + "' already holds run outputs (" +
                  existing.front().filename().string() + "); pass --force to replace them");
  }
  for (const auto& p : existing) fs::remove(p);
}

std::string meta_text(const RunSpec& spec, const InitialCondition& ic, const RunResult& result,
                      const std::string& status) {
  std::ostringstream out;
  out << "# wnwe run metadata\n";
  out << "version=" << version() << '\n';
  out << "status=" << status << '\n';
  out << "equation=" << spec.equation << '\n';
  if (spec.equation == "kdv") {
    out << "epsilon=" << format_real(spec.epsilon) << '\n';
    out << "beta=" << format_real(spec.beta) << '\n';
  } else if (spec.equation == "nls") {
    out << "mu=" << format_real(spec.mu) << '\n';
    out << "nu=" << format_real(spec.nu) << '\n';
  }
  out << "n=" << spec.n_points << '\n';
  out << "period=" << format_real(spec.period) << '\n';
  out << "dt=" << format_real(spec.dt) << '\n';
  out << "t_end=" << format_real(spec.t_end) << '\n';
  if (spec.mode == IterationMode::kFixed) {
    out << "iteration_mode=fixed\n";
    out << "iterations=" << spec.iterations << '\n';
  } else {
    out << "iteration_mode=tolerance\n";
    out << "tolerance=" << format_real(spec.tolerance) << '\n';
    out << "max_iterations=" << spec.max_iterations << '\n';
  }
  out << "nyquist=" << to_string(spec.nyquist) << '\n';
  out << "ic=" << spec.ic << '\n';
  if (!spec.ic_file.empty()) out << "ic_file=" << spec.ic_file << '\n';
  for (const auto& [key, value] : ic.params) out << "ic." << key << '=' << format_real(value) << '\n';
  out << "snapshot_every=" << spec.snapshot_every << '\n';
  out << "seed=" << spec.seed << '\n';
  out << "defaults=";
  for (std::size_t i = 0; i < spec.defaulted.size(); ++i) {
    out << (i ? "," : "") << spec.defaulted[i];
  }
  out << '\n';
  out << "steps=" << result.steps << '\n';
  out << "final_time=" << format_real(result.final_time) << '\n';
  out << "snapshots=" << result.snapshots << '\n';
  if (result.failed_step) {
    out << "failed_step=" << *result.failed_step << '\n';
    out << "failure=" << result.message << '\n';
  }
  return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

const char* version() { return WNWE_VERSION; }

std::string snapshot_name(std::size_t step) {
  std::string digits = std::to_string(step);
  if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
  return "snap_" + digits + ".csv";
}

RunResult run(const RunSpec& spec, std::ostream& log) {
  RunResult result;
  const fs::path dir(spec.out_dir);
  EquationSystem sys;
  InitialCondition ic;
  std::optional<SolverSession> session;
  try {
    sys = spec.make_system();
    ic = spec.make_initial_condition();
    SpectralGrid grid = make_grid(spec.n_points, spec.period);
    Field initial = ic.sample(grid);
    session.emplace(sys, std::move(grid), spec.step_config(), std::move(initial));
  } catch (const IoError& e) {
    result.exit_code = kExitIo;
    result.message = e.what();
    log << "error: " << e.what() << '\n';
    return result;
  } catch (const Error& e) {
    result.exit_code = kExitInvalidSpec;
    result.message = e.what();
    log << "error: " << e.what() << '\n';
    return result;
  }

  try {
    prepare_out_dir(dir, spec.force);
  } catch (const Error& e) {
    result.exit_code = kExitIo;
    result.message = e.what();
    log << "error: " << e.what() << '\n';
    return result;
  }

  SnapshotOptions snap;
  snap.equation = spec.equation;
  snap.dt = spec.dt;
  snap.reconstructed_column = spec.equation == "sge";

  std::string diagnostics;
  bool header_written = false;
  std::size_t max_iterations_seen = 0;
  const SpectralGrid& grid = session->grid();

  auto observer = [&](const ObservedState& s) {
    const NamedValues inv = invariants(sys, s.state, grid);
    if (!header_written) {
      diagnostics += "step,time";
      for (const auto& [name, value] : inv) diagnostics += "," + name;
      diagnostics += ",iterations,max_ratio\n";
      header_written = true;
    }
    diagnostics += std::to_string(s.step) + "," + format_real(s.time);
    for (const auto& [name, value] : inv) diagnostics += "," + format_real(value);
    const std::size_t iters = s.stats ? s.stats->iterations : 0;
    max_iterations_seen = std::max(max_iterations_seen, iters);
    diagnostics += "," + std::to_string(iters) + "," +
                   format_real(s.stats ? s.stats->max_ratio() : 0.0) + "\n";
    if (s.step % spec.snapshot_every == 0) {
      write_snapshot(dir / snapshot_name(s.step), grid, s.state, s.time, snap);
      ++result.snapshots;
    }
  };

  std::string status = "completed";
  try {
    const TrajectorySummary summary = integrate(*session, spec.t_end, observer, 1);
    result.steps = summary.steps;
    result.final_time = summary.final_time;
    log << "completed " << result.steps << " steps, t = " << format_real(result.final_time)
        << ", " << result.snapshots << " snapshots, max contraction ratio "
        << format_real(summary.max_ratio) << '\n';
  } catch (const DivergenceError& e) {
    status = "diverged";
    result.exit_code = kExitDiverged;
    result.failed_step = e.step_index();
    result.message = e.what();
  } catch (const ConvergenceError& e) {
    status = "diverged";
    result.exit_code = kExitDiverged;
    result.failed_step = e.step_index();
    result.message = e.what();
  } catch (const IoError& e) {
    status = "io_error";
    result.exit_code = kExitIo;
    result.message = e.what();
  }
  if (result.exit_code != kExitOk) {
    result.steps = session->step_count();
    result.final_time = session->time();
    log << "error: " << result.message << '\n';
  }

  try {
    write_text(dir / "diagnostics.csv", diagnostics);
    write_text(dir / "run.meta", meta_text(spec, ic, result, status));
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    if (result.exit_code == kExitOk) result.exit_code = kExitIo;
  }
  return result;
}

std::string norm_scan_csv(const EquationSystem& sys, const SpectralGrid& grid,
                          std::span<const double> dt_values) {
  const SystemDegrees deg = validate_system(sys);
  const double expected = static_cast<double>(deg.q) / static_cast<double>(deg.ell);
  std::string out = "dt,d,norm_b,expected_slope\n";
  for (double dt : dt_values) {
    out += format_real(dt) + "," + format_real(dt / 2.0) + "," +
           format_real(operator_norm_B(sys, grid, dt)) + "," + format_real(expected) + "\n";
  }
  return out;
}

SolitonResult run_soliton_case(const SolitonCase& setup, double dt) {
  SpectralGrid grid = make_grid(setup.n_points, setup.period);
  const InitialCondition ic = initial_condition(
      "nls_envelope", {{"a", setup.a}, {"v", setup.v}, {"mu", setup.mu}, {"nu", setup.nu}});
  const EquationSystem sys = nls_system(setup.mu, setup.nu);
  SolverSession session(sys, grid, StepConfig::converged(dt, setup.tolerance), ic.sample(grid));

  SolitonResult result;
  result.dt = dt;
  result.initial_mass = value_of(invariants(sys, session.state(), grid), "mass");
  auto observer = [&](const ObservedState& s) {
    const double m = value_of(invariants(sys, s.state, grid), "mass");
    result.max_mass_drift =
        std::max(result.max_mass_drift, std::abs(m - result.initial_mass) / result.initial_mass);
  };
  const TrajectorySummary summary = integrate(session, setup.t_end, observer, 1);
  result.steps = summary.steps;
  result.final_time = summary.final_time;
  result.error = error_vs_reference(
      session.state(),
      [&](double x, double t) { return nls_envelope_soliton(setup.a, setup.v, setup.mu, setup.nu, x, t); },
      session.time(), grid);
  return result;
}

std::string soliton_error_csv(const SolitonCase& setup, std::span<const double> dt_values) {
  std::string out = "dt,steps,linf,l2,mass_drift,order\n";
  double prev = 0.0;
  for (std::size_t i = 0; i < dt_values.size(); ++i) {
    const SolitonResult r = run_soliton_case(setup, dt_values[i]);
    out += format_real(r.dt) + "," + std::to_string(r.steps) + "," + format_real(r.error.linf) + "," +
           format_real(r.error.l2) + "," + format_real(r.max_mass_drift) + ",";
    if (i > 0 && prev > 0.0 && r.error.linf > 0.0) {
      out += format_real(std::log(prev / r.error.linf) / std::log(dt_values[i - 1] / dt_values[i]));
    }
    out += "\n";
    prev = r.error.linf;
  }
  return out;
}

}  // namespace wnwe

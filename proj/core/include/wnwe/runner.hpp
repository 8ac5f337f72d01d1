#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wnwe/diagnostics.hpp"
#include "wnwe/run_spec.hpp"

namespace wnwe {

/// Library version string baked in at build time.
const char* version();

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidSpec = 1,
  kExitIo = 2,
  kExitDiverged = 3,
};

struct RunResult {
  int exit_code = kExitOk;
  std::size_t steps = 0;
  double final_time = 0.0;
  std::size_t snapshots = 0;
  std::optional<std::size_t> failed_step;
  std::string message;
};

/// Snapshot file name for a given step: snap_00000050.csv.
std::string snapshot_name(std::size_t step);

/// Integrates the spec and writes into spec.out_dir:
///   run.meta         resolved parameters, defaults, version and outcome
///   snap_*.csv       snapshots every spec.snapshot_every steps (plus t = 0)
///   diagnostics.csv  per-step time, invariants, iteration count, max ratio
/// Existing outputs are only replaced when spec.force is set.
RunResult run(const RunSpec& spec, std::ostream& log);

/// dt,d,norm_b,expected_slope rows for operator_norm_B over `dt_values`.
std::string norm_scan_csv(const EquationSystem& sys, const SpectralGrid& grid,
                          std::span<const double> dt_values);

/// NLS envelope-soliton accuracy setup.
struct SolitonCase {
  double mu = 1.0;
  double nu = 2.0;
  double a = 1.0;
  double v = 0.0;
  double period = 40.0;
  std::size_t n_points = 512;
  double t_end = 1.0;
  double tolerance = 1e-12;
};

struct SolitonResult {
  double dt = 0.0;
  std::size_t steps = 0;
  double final_time = 0.0;
  ErrorNorms error;
  double initial_mass = 0.0;
  double max_mass_drift = 0.0;  // max_t |m(t) - m(0)| / m(0)
};

SolitonResult run_soliton_case(const SolitonCase& setup, double dt);

/// dt,steps,linf,l2,mass_drift,order rows; order compares each row with the
/// previous one (empty on the first row).
std::string soliton_error_csv(const SolitonCase& setup, std::span<const double> dt_values);

}  // namespace wnwe

#pragma once

// Trapezoidal-rule time stepping for weakly nonlinear wave equations.
//
// Integrating u_t = L(D)u + M(D)G(u) over one step with the trapezoidal rule
// and d = dt/2 gives the implicit relation
//   u(t+dt) = C u(t) + B [G(u(t)) + G(u(t+dt))],
//   C = (I + d L(D)) / (I - d L(D)),  B = d M(D) / (I - d L(D)).
// Both operators are diagonal in the Fourier basis. u(t+dt) is found as the
// fixed point of H_u(w) = C u + B [G(u) + G(w)], iterated from w0 = u(t).

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "wnwe/equations.hpp"
#include "wnwe/spectral.hpp"

namespace wnwe {

enum class NyquistPolicy {
  kKeep,  // treat the Nyquist mode like every other mode, kappa = 2 pi (N/2) / P; config value "paper"
  kZero,  // drop odd-derivative contributions at the Nyquist mode
};

const char* to_string(NyquistPolicy policy);
std::optional<NyquistPolicy> parse_nyquist_policy(std::string_view text);

/// Fourier-side Cayley transform and filter, per component and mode.
struct Multipliers {
  Multiplier c_hat;  // (1 + d L(i kappa)) / (1 - d L(i kappa))
  Multiplier b_hat;  // d M(i kappa) / (1 - d L(i kappa))
  double d = 0.0;    // dt / 2
};

Multipliers build_multipliers(const EquationSystem& sys, const SpectralGrid& grid, double dt,
                              NyquistPolicy policy = NyquistPolicy::kKeep);

enum class IterationMode { kFixed, kTolerance };

struct StepConfig {
  double dt = 0.01;
  IterationMode mode = IterationMode::kFixed;
  std::size_t iterations = 3;        // fixed mode
  double tolerance = 1e-12;          // tolerance mode, relative to max(1, ||w||)
  std::size_t max_iterations = 25;   // tolerance mode
  NyquistPolicy nyquist = NyquistPolicy::kKeep;

  static StepConfig fixed(double dt, std::size_t iterations = 3);
  static StepConfig converged(double dt, double tolerance = 1e-12, std::size_t max_iterations = 25);
};

/// Iterate-difference history of one step. deltas[j] = ||w_{j+1} - w_j|| in
/// the discrete L2 norm; ratios holds deltas[j+1]/deltas[j] wherever
/// deltas[j] > 0.
struct IterationStats {
  std::vector<double> deltas;
  std::vector<double> ratios;
  std::size_t iterations = 0;

  /// Largest entry of ratios, or 0 when there are none.
  double max_ratio() const noexcept;
};

/// Per-step data that does not depend on the iterate: C u_hat and G(u).
struct StepPrecomputed {
  Spectrum cu;
  Field gu;
};

class SolverSession {
 public:
  SolverSession(EquationSystem sys, SpectralGrid grid, StepConfig config, Field initial,
                double t0 = 0.0);

  const EquationSystem& system() const noexcept { return sys_; }
  const SpectralGrid& grid() const noexcept { return grid_; }
  const StepConfig& config() const noexcept { return config_; }
  const Multipliers& multipliers() const noexcept { return mult_; }
  const Field& state() const noexcept { return state_; }
  const IterationStats& last_stats() const noexcept { return last_stats_; }
  const SystemDegrees& degrees() const noexcept { return degrees_; }

  /// Steps taken since construction.
  std::size_t step_count() const noexcept { return total_steps_; }
  /// Start time of the current dt segment plus (steps in segment) * dt; a
  /// product rather than a running sum so long runs do not drift.
  double time() const noexcept {
    return segment_t0_ + static_cast<double>(segment_steps_) * config_.dt;
  }

  /// Changes the configuration. Multipliers are rebuilt only if dt or the
  /// Nyquist policy changed.
  void set_config(const StepConfig& config);

  StepPrecomputed precompute() const;
  Field apply_h(const Field& w, const StepPrecomputed& pre) const;

  /// Advances one step. Throws DivergenceError / ConvergenceError; the session
  /// is left untouched when a step fails.
  const IterationStats& step();

 private:
  EquationSystem sys_;
  SpectralGrid grid_;
  StepConfig config_;
  SystemDegrees degrees_;
  Multipliers mult_;
  Field state_;
  IterationStats last_stats_;
  double segment_t0_ = 0.0;
  std::size_t segment_steps_ = 0;
  std::size_t total_steps_ = 0;
};

/// H_u(w) = IFT(Cu + b_hat FT[G(u) + G(w)]).
Field apply_H(const SolverSession& session, const Field& w, const StepPrecomputed& pre);

const IterationStats& step(SolverSession& session);

/// What an integrate() observer sees. References are valid only during the call.
struct ObservedState {
  std::size_t step;
  double time;
  const Field& state;
  const IterationStats* stats;  // null for the initial snapshot
};

using Observer = std::function<void(const ObservedState&)>;

struct TrajectorySummary {
  std::size_t steps = 0;
  double final_time = 0.0;
  std::size_t snapshots = 0;
  std::size_t total_iterations = 0;
  double max_ratio = 0.0;
};

/// Steps while time() < t_end - dt/2. The observer (if any) is called for the
/// initial state and after every `cadence`-th step. Step errors propagate
/// with the failing step index.
TrajectorySummary integrate(SolverSession& session, double t_end, const Observer& observer = {},
                            std::size_t cadence = 1);

}  // namespace wnwe

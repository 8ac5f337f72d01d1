#include "wnwe/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wnwe/error.hpp"

namespace wnwe {

namespace {

constexpr double kDivergenceGrowth = 1e6;

double difference_norm(const Field& a, const Field& b) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < a.n_components(); ++c) {
    for (std::size_t j = 0; j < a[c].size(); ++j) sum += std::norm(a[c][j] - b[c][j]);
    count = a[c].size();
  }
  return count == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(count));
}

void check_config(const StepConfig& config) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
    throw InvalidArgument("step config: dt must be positive and finite");
  }
  if (config.mode == IterationMode::kFixed && config.iterations < 1) {
    throw InvalidArgument("step config: iterations must be >= 1");
  }
  if (config.mode == IterationMode::kTolerance) {
    if (!(config.tolerance > 0.0)) throw InvalidArgument("step config: tolerance must be positive");
    if (config.max_iterations < 1) throw InvalidArgument("step config: max_iterations must be >= 1");
  }
}

}  // namespace

const char* to_string(NyquistPolicy policy) {
  return policy == NyquistPolicy::kZero ? "zero" : "paper";
}

std::optional<NyquistPolicy> parse_nyquist_policy(std::string_view text) {
  if (text == "paper") return NyquistPolicy::kKeep;
  if (text == "zero") return NyquistPolicy::kZero;
  return std::nullopt;
}

StepConfig StepConfig::fixed(double dt, std::size_t iterations) {
  StepConfig c;
  c.dt = dt;
  c.mode = IterationMode::kFixed;
  c.iterations = iterations;
  return c;
}

StepConfig StepConfig::converged(double dt, double tolerance, std::size_t max_iterations) {
  StepConfig c;
  c.dt = dt;
  c.mode = IterationMode::kTolerance;
  c.tolerance = tolerance;
  c.max_iterations = max_iterations;
  return c;
}

double IterationStats::max_ratio() const noexcept {
  double m = 0.0;
  for (double r : ratios) m = std::max(m, r);
  return m;
}

Multipliers build_multipliers(const EquationSystem& sys, const SpectralGrid& grid, double dt,
                              NyquistPolicy policy) {
  validate_system(sys);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("build_multipliers: dt must be positive");

  Multipliers m;
  m.d = dt / 2.0;
  const std::size_t n = sys.n_components();
  const auto& kappa = grid.wavenumbers();
  const std::size_t nyq = grid.nyquist_index();
  m.c_hat.assign(n, ComplexVector(grid.size()));
  m.b_hat.assign(n, ComplexVector(grid.size()));
  for (std::size_t c = 0; c < n; ++c) {
    const SymbolPolynomial& L = sys.linear[c];
    const SymbolPolynomial& M = sys.nonlinear[c];
    const SymbolPolynomial L_even = L.even_part();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const bool drop_odd = policy == NyquistPolicy::kZero && j == nyq;
      const Complex dl = m.d * (drop_odd ? L_even : L).at_wavenumber(kappa[j]);
      const Complex denom = 1.0 - dl;
      m.c_hat[c][j] = (1.0 + dl) / denom;
      m.b_hat[c][j] = drop_odd ? Complex{} : m.d * M.at_wavenumber(kappa[j]) / denom;
    }
  }
  return m;
}

SolverSession::SolverSession(EquationSystem sys, SpectralGrid grid, StepConfig config, Field initial,
                             double t0)
    : sys_(std::move(sys)),
      grid_(std::move(grid)),
      config_(config),
      state_(std::move(initial)),
      segment_t0_(t0) {
  check_config(config_);
  degrees_ = validate_system(sys_);
  if (state_.n_components() != sys_.n_components()) {
    throw ShapeMismatch("SolverSession: initial field has " + std::to_string(state_.n_components()) +
                        " components, system '" + sys_.name + "' needs " +
                        std::to_string(sys_.n_components()));
  }
  for (const auto& comp : state_.components) {
    if (comp.size() != grid_.size()) throw ShapeMismatch("SolverSession: initial field length != N");
  }
  if (!all_finite(state_)) throw InvalidArgument("SolverSession: initial field is not finite");
  mult_ = build_multipliers(sys_, grid_, config_.dt, config_.nyquist);
}

void SolverSession::set_config(const StepConfig& config) {
  check_config(config);
  const bool rebuild = config.dt != config_.dt || config.nyquist != config_.nyquist;
  if (config.dt != config_.dt) {
    segment_t0_ = time();
    segment_steps_ = 0;
  }
  config_ = config;
  if (rebuild) mult_ = build_multipliers(sys_, grid_, config_.dt, config_.nyquist);
}

StepPrecomputed SolverSession::precompute() const {
  StepPrecomputed pre;
  pre.cu = apply_multiplier(dft_forward(state_, grid_), mult_.c_hat);
  pre.gu = eval_nonlinearity(sys_, state_);
  return pre;
}

Field SolverSession::apply_h(const Field& w, const StepPrecomputed& pre) const {
  Field g = eval_nonlinearity(sys_, w);
  if (pre.gu.n_components() != g.n_components() || pre.cu.n_components() != g.n_components()) {
    throw ShapeMismatch("apply_H: precomputed data does not match the iterate");
  }
  for (std::size_t c = 0; c < g.n_components(); ++c) {
    if (pre.gu[c].size() != g[c].size()) throw ShapeMismatch("apply_H: G(u) length mismatch");
    for (std::size_t j = 0; j < g[c].size(); ++j) g[c][j] += pre.gu[c][j];
  }
  Spectrum s = dft_forward(g, grid_);
  for (std::size_t c = 0; c < s.n_components(); ++c) {
    for (std::size_t j = 0; j < s[c].size(); ++j) {
      s[c][j] = pre.cu[c][j] + mult_.b_hat[c][j] * s[c][j];
    }
  }
  return dft_inverse(s, grid_);
}

const IterationStats& SolverSession::step() {
  const std::size_t index = total_steps_;
  const StepPrecomputed pre = precompute();

  IterationStats stats;
  Field w = state_;
  const bool fixed = config_.mode == IterationMode::kFixed;
  const std::size_t limit = fixed ? config_.iterations : config_.max_iterations;
  bool converged = fixed;
  for (std::size_t j = 0; j < limit; ++j) {
    Field next = apply_h(w, pre);
    if (!all_finite(next)) {
      throw DivergenceError(index, "step " + std::to_string(index) + ": non-finite values at iteration " +
                                       std::to_string(j + 1));
    }
    const double delta = difference_norm(next, w);
    const double w_norm = discrete_l2_norm(w);
    if (!stats.deltas.empty()) {
      const double prev = stats.deltas.back();
      if (prev > 0.0) stats.ratios.push_back(delta / prev);
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, w_norm);
      if (delta > kDivergenceGrowth * stats.deltas.front() && delta > floor) {
        throw DivergenceError(index, "step " + std::to_string(index) +
                                         ": iterate differences grew by more than 1e6");
      }
    }
    stats.deltas.push_back(delta);
    stats.iterations = j + 1;
    w = std::move(next);
    if (!fixed && delta <= config_.tolerance * std::max(1.0, w_norm)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError(index, "step " + std::to_string(index) + ": no convergence within " +
                                      std::to_string(limit) + " iterations");
  }
  state_ = std::move(w);
  last_stats_ = std::move(stats);
  ++segment_steps_;
  ++total_steps_;
  return last_stats_;
}

Field apply_H(const SolverSession& session, const Field& w, const StepPrecomputed& pre) {
  return session.apply_h(w, pre);
}

const IterationStats& step(SolverSession& session) { return session.step(); }

TrajectorySummary integrate(SolverSession& session, double t_end, const Observer& observer,
                            std::size_t cadence) {
  if (cadence < 1) throw InvalidArgument("integrate: cadence must be >= 1");
  if (t_end < session.time()) throw InvalidArgument("integrate: t_end is before the current time");
  TrajectorySummary summary;
  if (observer) {
    observer(ObservedState{session.step_count(), session.time(), session.state(), nullptr});
    ++summary.snapshots;
  }
  const double half = session.config().dt / 2.0;
  while (session.time() < t_end - half) {
    const IterationStats& stats = session.step();
    ++summary.steps;
    summary.total_iterations += stats.iterations;
    summary.max_ratio = std::max(summary.max_ratio, stats.max_ratio());
    if (observer && summary.steps % cadence == 0) {
      observer(ObservedState{session.step_count(), session.time(), session.state(), &stats});
      ++summary.snapshots;
    }
  }
  summary.final_time = session.time();
  return summary;
}

}  // namespace wnwe

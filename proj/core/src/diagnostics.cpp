#include "wnwe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wnwe/error.hpp"

namespace wnwe {

namespace {

double max_modulus(const Multiplier& diag, std::size_t* argmax = nullptr) {
  double best = 0.0;
  for (const auto& comp : diag) {
    for (std::size_t j = 0; j < comp.size(); ++j) {
      const double v = std::abs(comp[j]);
      if (v > best) {
        best = v;
        if (argmax) *argmax = j;
      }
    }
  }
  return best;
}

}  // namespace

double operator_norm_B(const EquationSystem& sys, const SpectralGrid& grid, double dt) {
  return max_modulus(build_multipliers(sys, grid, dt).b_hat);
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("fit_power_law: need >= 2 paired points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("fit_power_law: data must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    const double dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InvalidArgument("fit_power_law: x values are all equal");
  if (syy == 0.0) throw InvalidArgument("fit_power_law: degenerate fit, all values equal");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > 0.0)) throw InvalidArgument("logspace: need n >= 2, positive ends");
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

ScalingFit fit_scaling_exponent(const EquationSystem& sys, const SpectralGrid& grid,
                                std::span<const double> dt_values) {
  const SystemDegrees deg = validate_system(sys);
  if (dt_values.size() < 4) throw InvalidArgument("fit_scaling_exponent: need >= 4 dt values");
  for (std::size_t i = 1; i < dt_values.size(); ++i) {
    if (!(dt_values[i] > dt_values[i - 1])) {
      throw InvalidArgument("fit_scaling_exponent: dt values must be strictly increasing");
    }
  }
  if (!(dt_values.front() > 0.0) || dt_values.back() / dt_values.front() < 100.0 * (1.0 - 1e-12)) {
    throw InvalidArgument("fit_scaling_exponent: dt values must be positive and span >= 2 decades");
  }
  int max_m_degree = -1;
  for (const auto& M : sys.nonlinear) max_m_degree = std::max(max_m_degree, M.degree());

  ScalingFit fit;
  fit.expected_slope = static_cast<double>(deg.q) / static_cast<double>(deg.ell);
  const auto& modes = grid.modes();
  for (double dt : dt_values) {
    std::size_t argmax = 0;
    const double norm = max_modulus(build_multipliers(sys, grid, dt).b_hat, &argmax);
    if (max_m_degree >= 1 &&
        static_cast<std::size_t>(std::labs(modes[argmax])) >= grid.size() / 2) {
      throw InvalidArgument("fit_scaling_exponent: |b_hat| peaks at the grid edge for dt = " +
                            std::to_string(dt) + "; refine the grid or raise dt");
    }
    fit.dt_values.push_back(dt);
    fit.norm_values.push_back(norm);
  }
  const PowerLawFit line = fit_power_law(fit.dt_values, fit.norm_values);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  return fit;
}

NamedValues invariants(const EquationSystem& sys, const Field& field, const SpectralGrid& grid) {
  if (field.n_components() != sys.n_components()) {
    throw ShapeMismatch("invariants: field does not match system '" + sys.name + "'");
  }
  const double h = grid.spacing();
  auto sum_sq = [&](std::size_t c) {
    double s = 0.0;
    for (const auto& v : field[c]) s += std::norm(v);
    return h * s;
  };
  if (sys.name == "kdv") {
    double s = 0.0;
    for (const auto& v : field[0]) s += v.real();
    return {{"integral_u", h * s}, {"integral_u2", sum_sq(0)}};
  }
  if (sys.name == "nls") return {{"mass", sum_sq(0)}};
  double total = 0.0;
  for (std::size_t c = 0; c < field.n_components(); ++c) total += sum_sq(c);
  return {{"l2", total}};
}

double value_of(const NamedValues& values, const std::string& name) {
  for (const auto& [key, value] : values) {
    if (key == name) return value;
  }
  throw InvalidArgument("no diagnostic named '" + name + "'");
}

ComplexVector pde_residual_second_order(std::span<const ComplexVector> snapshots, double dt,
                                        const SpectralGrid& grid, const ScalarMap& gamma) {
  if (snapshots.size() < 3) throw InvalidArgument("pde_residual_second_order: need >= 3 snapshots");
  if (!(dt > 0.0)) throw InvalidArgument("pde_residual_second_order: dt must be positive");
  for (const auto& s : snapshots) {
    if (s.size() != grid.size()) throw ShapeMismatch("pde_residual_second_order: snapshot length != N");
  }
  const std::size_t mid = snapshots.size() / 2;
  const ComplexVector& prev = snapshots[mid - 1];
  const ComplexVector& cur = snapshots[mid];
  const ComplexVector& next = snapshots[mid + 1];

  ComplexVector uxx = dft_forward(cur, grid);
  const auto& kappa = grid.wavenumbers();
  for (std::size_t j = 0; j < uxx.size(); ++j) uxx[j] *= -kappa[j] * kappa[j];
  uxx = dft_inverse(uxx, grid);

  ComplexVector residual(grid.size());
  const double inv_dt2 = 1.0 / (dt * dt);
  for (std::size_t j = 0; j < residual.size(); ++j) {
    const Complex utt = (next[j] - 2.0 * cur[j] + prev[j]) * inv_dt2;
    residual[j] = utt - uxx[j] - gamma(cur[j]);
  }
  return residual;
}

ErrorNorms error_vs_reference(const Field& state, const ReferenceSolution& reference, double t,
                              const SpectralGrid& grid, std::size_t component) {
  if (component >= state.n_components()) throw ShapeMismatch("error_vs_reference: no such component");
  const ComplexVector& u = state[component];
  if (u.size() != grid.size()) throw ShapeMismatch("error_vs_reference: state length != N");
  const auto& x = grid.sample_points();
  ErrorNorms e;
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double err = std::abs(u[j] - reference(x[j], t));
    e.linf = std::max(e.linf, err);
    sum += err * err;
  }
  e.l2 = std::sqrt(sum / static_cast<double>(u.size()));
  return e;
}

double observed_order(double err_coarse, double err_fine) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0)) {
    throw InvalidArgument("observed_order: errors must be positive");
  }
  return std::log2(err_coarse / err_fine);
}

}  // namespace wnwe

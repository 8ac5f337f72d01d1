#pragma once

// Numerical checks on the stepping scheme: filter-operator norms and their
// dt scaling, conserved quantities, residual and error oracles.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wnwe/equations.hpp"
#include "wnwe/spectral.hpp"
#include "wnwe/stepper.hpp"

namespace wnwe {

/// max over components and grid modes of |b_hat|: the operator norm of B on
/// L2 (and on every H^m, the Fourier basis being orthogonal).
double operator_norm_B(const EquationSystem& sys, const SpectralGrid& grid, double dt);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // log(norm) = intercept + slope * log(dt)
};

/// Least-squares line through (log x, log y). Needs >= 2 points, positive
/// data and non-constant x; throws InvalidArgument on a degenerate fit.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct ScalingFit {
  std::vector<double> dt_values;
  std::vector<double> norm_values;
  double slope = 0.0;
  double intercept = 0.0;
  double expected_slope = 0.0;  // q / ell
};

/// Measures operator_norm_B over `dt_values` (>= 4, strictly increasing,
/// spanning >= 2 decades) and fits the log-log slope. For deg M >= 1 the
/// maximising mode must be interior to the grid at every dt, otherwise the
/// grid truncates the norm and the fit is refused.
ScalingFit fit_scaling_exponent(const EquationSystem& sys, const SpectralGrid& grid,
                                std::span<const double> dt_values);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, std::size_t n);

using NamedValues = std::vector<std::pair<std::string, double>>;

/// Conserved-quantity integrals by the periodic trapezoid rule (spacing * sum).
///   kdv: integral_u (real part of the integral of u), integral_u2 (of |u|^2)
///   nls: mass (integral of |u|^2)
///   sge: l2 (integral of |u1|^2 + |u2|^2)
///   other systems: l2 over all components
NamedValues invariants(const EquationSystem& sys, const Field& field, const SpectralGrid& grid);

/// Looks up a named value; throws InvalidArgument if absent.
double value_of(const NamedValues& values, const std::string& name);

using ScalarMap = std::function<Complex(Complex)>;

/// D_tt u - D_xx u - gamma(u) at the middle snapshot, with a centered second
/// difference in time and spectral differentiation in space. Needs >= 3
/// equally spaced snapshots.
ComplexVector pde_residual_second_order(std::span<const ComplexVector> snapshots, double dt,
                                        const SpectralGrid& grid, const ScalarMap& gamma);

struct ErrorNorms {
  double linf = 0.0;
  double l2 = 0.0;  // root mean square
};

using ReferenceSolution = std::function<Complex(double x, double t)>;

/// Compares one component of `state` with `reference` sampled on the grid at
/// time t.
ErrorNorms error_vs_reference(const Field& state, const ReferenceSolution& reference, double t,
                              const SpectralGrid& grid, std::size_t component = 0);

/// log2(err_coarse / err_fine) for errors at dt and dt/2.
double observed_order(double err_coarse, double err_fine);

}  // namespace wnwe

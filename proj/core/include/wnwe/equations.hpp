#pragma once

// Weakly nonlinear wave equations u^i_t = L^i(D) u^i + M^i(D) G^i(u):
// symbol polynomials, system validation, built-in KdV / NLS / Sine-Gordon
// systems and closed-form reference solutions.

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wnwe/spectral.hpp"

namespace wnwe {

using ParamMap = std::map<std::string, double>;

/// Constant-coefficient polynomial sum_m a_m X^m. Trailing zero coefficients
/// are trimmed so the leading coefficient is nonzero unless the polynomial is
/// identically zero.
class SymbolPolynomial {
 public:
  SymbolPolynomial() = default;
  explicit SymbolPolynomial(std::vector<Complex> coefficients);

  static SymbolPolynomial monomial(Complex coefficient, std::size_t power);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<Complex>& coefficients() const noexcept { return coeffs_; }
  Complex coefficient(std::size_t m) const noexcept {
    return m < coeffs_.size() ? coeffs_[m] : Complex{};
  }

  Complex operator()(Complex x) const noexcept;
  /// L(i kappa).
  Complex at_wavenumber(double kappa) const noexcept { return (*this)(Complex(0.0, kappa)); }

  /// Keeps only the even-degree (or odd-degree) terms.
  SymbolPolynomial even_part() const;
  SymbolPolynomial odd_part() const;

  friend bool operator==(const SymbolPolynomial&, const SymbolPolynomial&) = default;

 private:
  std::vector<Complex> coeffs_;
};

/// True iff a_0 = 0, a_m real for odd m and purely imaginary for even m; that
/// is, iff L(ik) is imaginary for every real k. Exact test, no tolerance.
bool is_formally_skew_adjoint(const SymbolPolynomial& p);

/// Pointwise nonlinearity: maps the n values (u^1(x), ..., u^n(x)) at one
/// sample to (G^1, ..., G^n). Must be pure.
using PointwiseMap = std::function<void(std::span<const Complex> in, std::span<Complex> out)>;

struct EquationSystem {
  std::string name;
  std::vector<SymbolPolynomial> linear;     // L^i
  std::vector<SymbolPolynomial> nonlinear;  // M^i
  PointwiseMap nonlinearity;                // G
  ParamMap params;

  std::size_t n_components() const noexcept { return linear.size(); }
};

struct SystemDegrees {
  int ell = 0;  // common degree of the L^i
  int q = 0;    // min_i (ell - deg M^i)
  friend bool operator==(const SystemDegrees&, const SystemDegrees&) = default;
};

/// Checks the four defining conditions and returns (ell, q). Throws
/// ValidationError carrying the first failing condition.
SystemDegrees validate_system(const EquationSystem& sys);

/// u_t = -eps u_xxx - beta u u_x, i.e. L = -eps X^3, M = -(beta/2) X, G = u^2.
EquationSystem kdv_system(double dispersion = 1.0, double nonlinear_coeff = 1.0);

/// i u_t + mu u_xx + nu |u|^2 u = 0, i.e. L = i mu X^2, M = i nu, G = |u|^2 u.
EquationSystem nls_system(double mu = 1.0, double nu = 1.0);

/// Sine-Gordon u_tt = u_xx + sin u as the first-order pair
///   u1_t =  u1_x + 2 sin(u2 / 2),
///   u2_t = -u2_x + 2 sin(u1 / 2),
/// with u1 = u + v, u2 = u - v and u recovered as (u1 + u2) / 2.
EquationSystem sge_system();

/// Applies G sample by sample.
Field eval_nonlinearity(const EquationSystem& sys, const Field& field);
/// Same, writing into `out` (resized as needed).
void eval_nonlinearity(const EquationSystem& sys, const Field& field, Field& out);

/// Envelope (bright) soliton of i u_t + mu u_xx + nu |u|^2 u = 0 travelling at
/// speed v:
///   sqrt(2/nu) a sech(a (x - v t) / sqrt(mu)) exp(i[(v/2mu) x - (v^2/4mu - a^2) t]).
/// For v = 0 this is sqrt(2/nu) a sech(a x / sqrt(mu)) exp(i a^2 t).
Complex nls_envelope_soliton(double a, double v, double mu, double nu, double x, double t);

struct NlsParams {
  double mu = 1.0;
  double nu = 1.0;
};

/// If u solves the (mu, nu) equation then alpha u(beta x, gamma t) solves the
/// (gamma mu / beta^2, gamma nu / alpha^2) equation.
NlsParams rescale_nls_params(double mu, double nu, double alpha, double beta, double gamma);

/// (u1 + u2) / 2, elementwise.
ComplexVector sge_reconstruct(std::span<const Complex> u1, std::span<const Complex> u2);

// --- initial conditions ---------------------------------------------------

struct InitialCondition {
  std::string name;
  std::size_t n_components = 1;
  /// Writes the n_components values at physical position x.
  std::function<void(double x, std::span<Complex> out)> evaluator;
  /// Resolved parameters, including any defaults that were filled in.
  ParamMap params;

  Field sample(const SpectralGrid& grid) const;
};

/// Built-in initial conditions. Recognised names and parameters:
///   nls_sech      b, nu                      sqrt(2/nu) b sech(b x)
///   nls_envelope  a, v, mu, nu               nls_envelope_soliton at t = 0
///   kdv_gaussian  c1, c2 (period for defaults) c2 exp(-c1 x^2)
///   sge_zero      -                          (0, 0)
///   sge_sine      amplitude, wavenumber      (amplitude sin(wavenumber x), 0)
/// kdv_gaussian defaults to c1 = 1.2/a, c2 = 1/a with a = period / 2 pi.
InitialCondition initial_condition(const std::string& name, const ParamMap& params = {});

/// Loads samples from a text file with columns x, re_1[, im_1[, re_2, im_2 ...]]
/// (whitespace or comma separated, '#' comments) and linearly interpolates
/// onto any grid. Positions outside the file's range take the end values.
InitialCondition initial_condition_from_file(const std::string& path, std::size_t n_components);

}  // namespace wnwe

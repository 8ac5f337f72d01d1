#include "wnwe/equations.hpp"

#include <cmath>
#include <string>

#include "wnwe/error.hpp"

namespace wnwe {

const char* to_string(ValidationFailure failure) {
  switch (failure) {
    case ValidationFailure::kNotSkewAdjoint: return "not_skew_adjoint";
    case ValidationFailure::kUnequalLinearDegrees: return "unequal_linear_degrees";
    case ValidationFailure::kNonlinearDegreeTooHigh: return "nonlinear_degree_too_high";
    case ValidationFailure::kNonzeroAtOrigin: return "nonzero_at_origin";
    case ValidationFailure::kMalformed: return "malformed";
  }
  return "unknown";
}

SymbolPolynomial::SymbolPolynomial(std::vector<Complex> coefficients)
    : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

SymbolPolynomial SymbolPolynomial::monomial(Complex coefficient, std::size_t power) {
  std::vector<Complex> c(power + 1);
  c[power] = coefficient;
  return SymbolPolynomial(std::move(c));
}

Complex SymbolPolynomial::operator()(Complex x) const noexcept {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

SymbolPolynomial SymbolPolynomial::even_part() const {
  std::vector<Complex> c = coeffs_;
  for (std::size_t m = 1; m < c.size(); m += 2) c[m] = Complex{};
  return SymbolPolynomial(std::move(c));
}

SymbolPolynomial SymbolPolynomial::odd_part() const {
  std::vector<Complex> c = coeffs_;
  for (std::size_t m = 0; m < c.size(); m += 2) c[m] = Complex{};
  return SymbolPolynomial(std::move(c));
}

bool is_formally_skew_adjoint(const SymbolPolynomial& p) {
  const auto& c = p.coefficients();
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (m == 0) {
      if (c[0] != Complex{}) return false;
    } else if (m % 2 == 1) {
      if (c[m].imag() != 0.0) return false;
    } else if (c[m].real() != 0.0) {
      return false;
    }
  }
  return true;
}

SystemDegrees validate_system(const EquationSystem& sys) {
  const std::size_t n = sys.n_components();
  if (n == 0 || sys.nonlinear.size() != n || !sys.nonlinearity) {
    throw ValidationError(ValidationFailure::kMalformed,
                          "system '" + sys.name + "': needs matching L, M lists and a nonlinearity");
  }
  int ell = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& L = sys.linear[i];
    if (L.is_zero()) {
      throw ValidationError(ValidationFailure::kMalformed,
                            "system '" + sys.name + "': L^" + std::to_string(i + 1) + " is zero");
    }
    if (!is_formally_skew_adjoint(L)) {
      throw ValidationError(ValidationFailure::kNotSkewAdjoint,
                            "system '" + sys.name + "': L^" + std::to_string(i + 1) +
                                " is not formally skew-adjoint");
    }
    if (i == 0) {
      ell = L.degree();
    } else if (L.degree() != ell) {
      throw ValidationError(ValidationFailure::kUnequalLinearDegrees,
                            "system '" + sys.name + "': L^" + std::to_string(i + 1) +
                                " has degree " + std::to_string(L.degree()) + ", expected " +
                                std::to_string(ell));
    }
  }
  int q = ell + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const int dm = sys.nonlinear[i].degree();
    if (dm >= ell) {
      throw ValidationError(ValidationFailure::kNonlinearDegreeTooHigh,
                            "system '" + sys.name + "': deg M^" + std::to_string(i + 1) + " = " +
                                std::to_string(dm) + " is not below ell = " + std::to_string(ell));
    }
    q = std::min(q, ell - dm);
  }
  ComplexVector origin(n);
  ComplexVector image(n, Complex(1.0, 0.0));
  sys.nonlinearity(origin, image);
  for (std::size_t i = 0; i < n; ++i) {
    if (image[i] != Complex{}) {
      throw ValidationError(ValidationFailure::kNonzeroAtOrigin,
                            "system '" + sys.name + "': G^" + std::to_string(i + 1) +
                                "(0) is nonzero");
    }
  }
  return {ell, q};
}

EquationSystem kdv_system(double dispersion, double nonlinear_coeff) {
  if (!(dispersion > 0.0)) throw InvalidArgument("kdv_system: dispersion must be positive");
  EquationSystem sys;
  sys.name = "kdv";
  sys.linear = {SymbolPolynomial::monomial(-dispersion, 3)};
  sys.nonlinear = {SymbolPolynomial::monomial(-0.5 * nonlinear_coeff, 1)};
  sys.nonlinearity = [](std::span<const Complex> in, std::span<Complex> out) {
    out[0] = in[0] * in[0];
  };
  sys.params = {{"epsilon", dispersion}, {"beta", nonlinear_coeff}};
  return sys;
}

EquationSystem nls_system(double mu, double nu) {
  if (!(mu > 0.0) || !(nu > 0.0)) throw InvalidArgument("nls_system: mu and nu must be positive");
  EquationSystem sys;
  sys.name = "nls";
  sys.linear = {SymbolPolynomial::monomial(Complex(0.0, mu), 2)};
  sys.nonlinear = {SymbolPolynomial::monomial(Complex(0.0, nu), 0)};
  sys.nonlinearity = [](std::span<const Complex> in, std::span<Complex> out) {
    out[0] = std::norm(in[0]) * in[0];
  };
  sys.params = {{"mu", mu}, {"nu", nu}};
  return sys;
}

EquationSystem sge_system() {
  EquationSystem sys;
  sys.name = "sge";
  sys.linear = {SymbolPolynomial::monomial(1.0, 1), SymbolPolynomial::monomial(-1.0, 1)};
  sys.nonlinear = {SymbolPolynomial::monomial(1.0, 0), SymbolPolynomial::monomial(1.0, 0)};
  sys.nonlinearity = [](std::span<const Complex> in, std::span<Complex> out) {
    const Complex u1 = in[0];
    const Complex u2 = in[1];
    out[0] = 2.0 * std::sin(0.5 * u2);
    out[1] = 2.0 * std::sin(0.5 * u1);
  };
  return sys;
}

void eval_nonlinearity(const EquationSystem& sys, const Field& field, Field& out) {
  const std::size_t n = sys.n_components();
  if (field.n_components() != n) {
    throw ShapeMismatch("eval_nonlinearity: field has " + std::to_string(field.n_components()) +
                        " components, system '" + sys.name + "' has " + std::to_string(n));
  }
  const std::size_t len = field.size();
  for (const auto& comp : field.components) {
    if (comp.size() != len) throw ShapeMismatch("eval_nonlinearity: ragged field");
  }
  out.components.resize(n);
  for (auto& comp : out.components) comp.resize(len);

  if (n == 1) {
    const auto& in0 = field[0];
    auto& out0 = out[0];
    for (std::size_t j = 0; j < len; ++j) {
      sys.nonlinearity(std::span<const Complex>(&in0[j], 1), std::span<Complex>(&out0[j], 1));
    }
    return;
  }
  ComplexVector in_point(n);
  ComplexVector out_point(n);
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t c = 0; c < n; ++c) in_point[c] = field[c][j];
    sys.nonlinearity(in_point, out_point);
    for (std::size_t c = 0; c < n; ++c) out[c][j] = out_point[c];
  }
}

Field eval_nonlinearity(const EquationSystem& sys, const Field& field) {
  Field out;
  eval_nonlinearity(sys, field, out);
  return out;
}

Complex nls_envelope_soliton(double a, double v, double mu, double nu, double x, double t) {
  const double xi = a * (x - v * t) / std::sqrt(mu);
  const double amplitude = std::sqrt(2.0 / nu) * a / std::cosh(xi);
  const double k = v / (2.0 * mu);
  const double omega = v * v / (4.0 * mu) - a * a;
  return std::polar(amplitude, k * x - omega * t);
}

NlsParams rescale_nls_params(double mu, double nu, double alpha, double beta, double gamma) {
  if (alpha == 0.0 || beta == 0.0 || gamma == 0.0) {
    throw InvalidArgument("rescale_nls_params: scale factors must be nonzero");
  }
  return {gamma / (beta * beta) * mu, gamma / (alpha * alpha) * nu};
}

ComplexVector sge_reconstruct(std::span<const Complex> u1, std::span<const Complex> u2) {
  if (u1.size() != u2.size()) {
    throw ShapeMismatch("sge_reconstruct: component lengths differ");
  }
  ComplexVector u(u1.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = 0.5 * (u1[j] + u2[j]);
  return u;
}

}  // namespace wnwe

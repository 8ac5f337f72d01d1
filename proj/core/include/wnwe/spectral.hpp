#pragma once

// Periodic sampling grids, discrete Fourier transforms and diagonal Fourier
// multipliers.
//
// Conventions: the forward transform is the unnormalised sum
//   u_hat(m) = sum_j u(x_j) exp(-2 pi i m j / N)
// and the inverse carries the 1/N. Spectral index j holds integer mode m_j
// with the ordering [0, 1, ..., N/2, -N/2+1, ..., -1], so the Nyquist mode
// +N/2 is present and -N/2 is not.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace wnwe {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

class FftPlan;

class SpectralGrid {
 public:
  std::size_t size() const noexcept { return n_points_; }
  double period() const noexcept { return period_; }
  double spacing() const noexcept { return period_ / static_cast<double>(n_points_); }
  bool power_of_two() const noexcept;

  /// x_j = -P/2 + j P / N.
  const std::vector<double>& sample_points() const noexcept { return x_; }
  /// Integer modes m_j in transform order.
  const std::vector<long>& modes() const noexcept { return modes_; }
  /// Physical wavenumbers kappa_j = 2 pi m_j / P.
  const std::vector<double>& wavenumbers() const noexcept { return kappa_; }

  std::size_t nyquist_index() const noexcept { return n_points_ / 2; }

  const FftPlan* plan() const noexcept { return plan_.get(); }

 private:
  friend SpectralGrid make_grid(std::size_t, double);
  SpectralGrid() = default;

  std::size_t n_points_ = 0;
  double period_ = 0.0;
  std::vector<double> x_;
  std::vector<long> modes_;
  std::vector<double> kappa_;
  std::shared_ptr<const FftPlan> plan_;  // null for non power-of-two N
};

/// Samples of an n-component field at the grid points.
struct Field {
  std::vector<ComplexVector> components;

  Field() = default;
  explicit Field(std::vector<ComplexVector> comps) : components(std::move(comps)) {}
  Field(std::size_t n_components, std::size_t n_points)
      : components(n_components, ComplexVector(n_points)) {}

  std::size_t n_components() const noexcept { return components.size(); }
  std::size_t size() const noexcept { return components.empty() ? 0 : components.front().size(); }
  ComplexVector& operator[](std::size_t i) { return components[i]; }
  const ComplexVector& operator[](std::size_t i) const { return components[i]; }

  friend bool operator==(const Field&, const Field&) = default;
};

/// Unnormalised Fourier coefficients of a Field, one vector per component.
struct Spectrum {
  std::vector<ComplexVector> components;

  Spectrum() = default;
  explicit Spectrum(std::vector<ComplexVector> comps) : components(std::move(comps)) {}
  Spectrum(std::size_t n_components, std::size_t n_points)
      : components(n_components, ComplexVector(n_points)) {}

  std::size_t n_components() const noexcept { return components.size(); }
  std::size_t size() const noexcept { return components.empty() ? 0 : components.front().size(); }
  ComplexVector& operator[](std::size_t i) { return components[i]; }
  const ComplexVector& operator[](std::size_t i) const { return components[i]; }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

/// Per-component, per-mode diagonal factors.
using Multiplier = std::vector<ComplexVector>;

/// Precomputed twiddles and bit-reversal table for a radix-2 transform.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  std::size_t size() const noexcept { return n_; }

  /// In-place transform. sign = -1 forward, +1 backward (unnormalised both ways).
  void execute(std::span<Complex> data, int sign) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  ComplexVector twiddles_;  // exp(-2 pi i k / n), k < n/2
};

/// Builds a grid on [-P/2, P/2). Requires even n_points >= 4 and period > 0.
SpectralGrid make_grid(std::size_t n_points, double period);

/// O(N^2) direct summation, any N. Used for non power-of-two grids and as an
/// independent check on the radix-2 path.
ComplexVector dft_direct(std::span<const Complex> data, int sign);

/// Unnormalised transform of one component on the given grid.
ComplexVector dft_forward(std::span<const Complex> samples, const SpectralGrid& grid);
/// Inverse with the 1/N factor.
ComplexVector dft_inverse(std::span<const Complex> coefficients, const SpectralGrid& grid);

Spectrum dft_forward(const Field& field, const SpectralGrid& grid);
Field dft_inverse(const Spectrum& spectrum, const SpectralGrid& grid);

Spectrum apply_multiplier(const Spectrum& spectrum, const Multiplier& diag);
/// Same diagonal applied to every component.
Spectrum apply_multiplier(const Spectrum& spectrum, std::span<const Complex> diag);

/// ||u||_m^2 = sum_k (1 + k^2)^(m/2) |u_hat(k)/N|^2 with k the integer mode,
/// summed over components. Returns ||u||_m.
double sobolev_norm(const Spectrum& spectrum, double m, const SpectralGrid& grid);

/// Zeroes every coefficient with |mode| > cutoff. cutoff must be <= N/2.
Spectrum band_limit_project(const Spectrum& spectrum, std::size_t cutoff, const SpectralGrid& grid);

/// Diagonal i * kappa_j, i.e. the symbol of d/dx.
ComplexVector derivative_symbol(const SpectralGrid& grid, int order = 1);

/// Root mean square over all samples of all components. Equals the m = 0
/// Sobolev norm of the field's spectrum.
double discrete_l2_norm(const Field& field);

bool all_finite(const Field& field);

}  // namespace wnwe

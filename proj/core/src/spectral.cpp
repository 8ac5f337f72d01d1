#include "wnwe/spectral.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "wnwe/error.hpp"

namespace wnwe {

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ShapeMismatch(std::string(what) + ": expected length " + std::to_string(want) +
                        ", got " + std::to_string(got));
  }
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), bitrev_(n), twiddles_(n / 2) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw InvalidArgument("FftPlan: size must be a power of two >= 2, got " + std::to_string(n));
  }
  const int bits = std::countr_zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) {
      r |= ((i >> b) & 1u) << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  // First octant by direct evaluation, the second by the cos/sin swap, the
  // rest by rotating through -i. Keeps symmetric entries exact mirrors.
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  const std::size_t quarter = n / 4;
  for (std::size_t k = 0; k < n / 2; ++k) {
    if (quarter > 0 && k >= quarter) {
      const Complex w = twiddles_[k - quarter];
      twiddles_[k] = Complex(w.imag(), -w.real());
    } else if (2 * k > quarter) {
      const double a = step * static_cast<double>(quarter - k);
      twiddles_[k] = Complex(std::sin(a), -std::cos(a));
    } else {
      const double a = step * static_cast<double>(k);
      twiddles_[k] = Complex(std::cos(a), -std::sin(a));
    }
  }
}

void FftPlan::execute(std::span<Complex> data, int sign) const {
  require_length(data.size(), n_, "FftPlan::execute");
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddles_[k * stride];
        if (sign > 0) w = std::conj(w);
        const Complex t = w * data[start + k + half];
        const Complex u = data[start + k];
        data[start + k] = u + t;
        data[start + k + half] = u - t;
      }
    }
  }
}

bool SpectralGrid::power_of_two() const noexcept { return std::has_single_bit(n_points_); }

SpectralGrid make_grid(std::size_t n_points, double period) {
  if (n_points < 4 || n_points % 2 != 0) {
    throw InvalidArgument("make_grid: n_points must be even and >= 4, got " +
                          std::to_string(n_points));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw InvalidArgument("make_grid: period must be positive and finite");
  }
  SpectralGrid grid;
  grid.n_points_ = n_points;
  grid.period_ = period;
  grid.x_.resize(n_points);
  grid.modes_.resize(n_points);
  grid.kappa_.resize(n_points);
  const auto n = static_cast<long>(n_points);
  const double dn = static_cast<double>(n_points);
  for (long j = 0; j < n; ++j) {
    grid.x_[j] = -period / 2.0 + static_cast<double>(j) * period / dn;
    const long m = j <= n / 2 ? j : j - n;
    grid.modes_[j] = m;
    grid.kappa_[j] = 2.0 * std::numbers::pi * static_cast<double>(m) / period;
  }
  if (grid.power_of_two()) {
    grid.plan_ = std::make_shared<const FftPlan>(n_points);
  }
  return grid;
}

ComplexVector dft_direct(std::span<const Complex> data, int sign) {
  const std::size_t n = data.size();
  ComplexVector out(n);
  const double base = static_cast<double>(sign) * 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      // Reduce m*j modulo n before forming the angle to keep it small.
      const std::size_t r = (m * j) % n;
      acc += data[j] * std::polar(1.0, base * static_cast<double>(r));
    }
    out[m] = acc;
  }
  return out;
}

ComplexVector dft_forward(std::span<const Complex> samples, const SpectralGrid& grid) {
  require_length(samples.size(), grid.size(), "dft_forward");
  if (const FftPlan* plan = grid.plan()) {
    ComplexVector out(samples.begin(), samples.end());
    plan->execute(out, -1);
    return out;
  }
  return dft_direct(samples, -1);
}

ComplexVector dft_inverse(std::span<const Complex> coefficients, const SpectralGrid& grid) {
  require_length(coefficients.size(), grid.size(), "dft_inverse");
  ComplexVector out;
  if (const FftPlan* plan = grid.plan()) {
    out.assign(coefficients.begin(), coefficients.end());
    plan->execute(out, +1);
  } else {
    out = dft_direct(coefficients, +1);
  }
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& v : out) v *= scale;
  return out;
}

Spectrum dft_forward(const Field& field, const SpectralGrid& grid) {
  Spectrum out;
  out.components.reserve(field.n_components());
  for (const auto& comp : field.components) out.components.push_back(dft_forward(comp, grid));
  return out;
}

Field dft_inverse(const Spectrum& spectrum, const SpectralGrid& grid) {
  Field out;
  out.components.reserve(spectrum.n_components());
  for (const auto& comp : spectrum.components) out.components.push_back(dft_inverse(comp, grid));
  return out;
}

Spectrum apply_multiplier(const Spectrum& spectrum, const Multiplier& diag) {
  if (diag.size() != spectrum.n_components()) {
    throw ShapeMismatch("apply_multiplier: multiplier has " + std::to_string(diag.size()) +
                        " components, spectrum has " + std::to_string(spectrum.n_components()));
  }
  Spectrum out = spectrum;
  for (std::size_t c = 0; c < out.n_components(); ++c) {
    require_length(diag[c].size(), out[c].size(), "apply_multiplier");
    for (std::size_t j = 0; j < out[c].size(); ++j) out[c][j] *= diag[c][j];
  }
  return out;
}

Spectrum apply_multiplier(const Spectrum& spectrum, std::span<const Complex> diag) {
  Spectrum out = spectrum;
  for (auto& comp : out.components) {
    require_length(diag.size(), comp.size(), "apply_multiplier");
    for (std::size_t j = 0; j < comp.size(); ++j) comp[j] *= diag[j];
  }
  return out;
}

double sobolev_norm(const Spectrum& spectrum, double m, const SpectralGrid& grid) {
  if (!(m >= 0.0)) throw InvalidArgument("sobolev_norm: exponent must be >= 0");
  const auto& modes = grid.modes();
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  double sum = 0.0;
  for (const auto& comp : spectrum.components) {
    require_length(comp.size(), grid.size(), "sobolev_norm");
    for (std::size_t j = 0; j < comp.size(); ++j) {
      const double k = static_cast<double>(modes[j]);
      const double weight = m == 0.0 ? 1.0 : std::pow(1.0 + k * k, m / 2.0);
      sum += weight * std::norm(comp[j] * inv_n);
    }
  }
  return std::sqrt(sum);
}

Spectrum band_limit_project(const Spectrum& spectrum, std::size_t cutoff, const SpectralGrid& grid) {
  if (cutoff > grid.size() / 2) {
    throw InvalidArgument("band_limit_project: cutoff " + std::to_string(cutoff) +
                          " exceeds N/2 = " + std::to_string(grid.size() / 2));
  }
  Spectrum out = spectrum;
  const auto& modes = grid.modes();
  for (auto& comp : out.components) {
    require_length(comp.size(), grid.size(), "band_limit_project");
    for (std::size_t j = 0; j < comp.size(); ++j) {
      if (static_cast<std::size_t>(std::labs(modes[j])) > cutoff) comp[j] = Complex{0.0, 0.0};
    }
  }
  return out;
}

ComplexVector derivative_symbol(const SpectralGrid& grid, int order) {
  ComplexVector out(grid.size());
  const auto& kappa = grid.wavenumbers();
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = std::pow(Complex(0.0, kappa[j]), order);
  }
  return out;
}

double discrete_l2_norm(const Field& field) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& comp : field.components) {
    for (const auto& v : comp) sum += std::norm(v);
    count = comp.size();
  }
  if (count == 0) return 0.0;
  return std::sqrt(sum / static_cast<double>(count));
}

bool all_finite(const Field& field) {
  for (const auto& comp : field.components) {
    for (const auto& v : comp) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

}  // namespace wnwe

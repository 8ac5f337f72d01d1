#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "wnwe/equations.hpp"
#include "wnwe/error.hpp"

namespace wnwe {

namespace {

double param_or(const ParamMap& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double required(const ParamMap& params, const std::string& ic, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw InvalidArgument("initial condition '" + ic + "': missing parameter '" + key + "'");
  }
  return it->second;
}

void reject_unknown(const ParamMap& params, const std::string& ic,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw InvalidArgument("initial condition '" + ic + "': unknown parameter '" + key + "'");
    }
  }
}

}  // namespace

Field InitialCondition::sample(const SpectralGrid& grid) const {
  Field field(n_components, grid.size());
  ComplexVector point(n_components);
  const auto& x = grid.sample_points();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    evaluator(x[j], point);
    for (std::size_t c = 0; c < n_components; ++c) field[c][j] = point[c];
  }
  return field;
}

InitialCondition initial_condition(const std::string& name, const ParamMap& params) {
  InitialCondition ic;
  ic.name = name;
  if (name == "nls_sech") {
    reject_unknown(params, name, {"b", "nu"});
    const double b = required(params, name, "b");
    const double nu = required(params, name, "nu");
    if (!(nu > 0.0)) throw InvalidArgument("nls_sech: nu must be positive");
    const double amp = std::sqrt(2.0 / nu) * b;
    ic.evaluator = [amp, b](double x, std::span<Complex> out) { out[0] = amp / std::cosh(b * x); };
    ic.params = {{"b", b}, {"nu", nu}};
  } else if (name == "nls_envelope") {
    reject_unknown(params, name, {"a", "v", "mu", "nu"});
    const double a = required(params, name, "a");
    const double v = param_or(params, "v", 0.0);
    const double mu = param_or(params, "mu", 1.0);
    const double nu = required(params, name, "nu");
    if (!(a > 0.0) || !(mu > 0.0) || !(nu > 0.0)) {
      throw InvalidArgument("nls_envelope: a, mu and nu must be positive");
    }
    ic.evaluator = [=](double x, std::span<Complex> out) {
      out[0] = nls_envelope_soliton(a, v, mu, nu, x, 0.0);
    };
    ic.params = {{"a", a}, {"v", v}, {"mu", mu}, {"nu", nu}};
  } else if (name == "kdv_gaussian") {
    reject_unknown(params, name, {"c1", "c2", "period"});
    const double period = param_or(params, "period", 20.0);
    const double a = period / (2.0 * std::numbers::pi);
    const double c1 = param_or(params, "c1", 1.2 / a);
    const double c2 = param_or(params, "c2", 1.0 / a);
    ic.evaluator = [c1, c2](double x, std::span<Complex> out) { out[0] = c2 * std::exp(-c1 * x * x); };
    ic.params = {{"c1", c1}, {"c2", c2}, {"period", period}};
  } else if (name == "sge_zero") {
    reject_unknown(params, name, {});
    ic.n_components = 2;
    ic.evaluator = [](double, std::span<Complex> out) {
      out[0] = Complex{};
      out[1] = Complex{};
    };
  } else if (name == "sge_sine") {
    reject_unknown(params, name, {"amplitude", "wavenumber"});
    const double amplitude = required(params, name, "amplitude");
    const double wavenumber = param_or(params, "wavenumber", 1.0);
    ic.n_components = 2;
    ic.evaluator = [amplitude, wavenumber](double x, std::span<Complex> out) {
      out[0] = amplitude * std::sin(wavenumber * x);
      out[1] = Complex{};
    };
    ic.params = {{"amplitude", amplitude}, {"wavenumber", wavenumber}};
  } else {
    throw InvalidArgument("unknown initial condition '" + name + "'");
  }
  return ic;
}

InitialCondition initial_condition_from_file(const std::string& path, std::size_t n_components) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open initial condition file '" + path + "'");

  std::vector<double> xs;
  std::vector<ComplexVector> values(n_components);
  std::string line;
  std::size_t lineno = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::vector<double> cols;
    std::string tok;
    while (row >> tok) {
      try {
        std::size_t used = 0;
        cols.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        if (xs.empty() && cols.empty()) break;  // header row
        throw IoError(path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    }
    if (cols.empty()) continue;
    if (columns == 0) {
      columns = cols.size();
      if (columns != 1 + n_components && columns != 1 + 2 * n_components) {
        throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(1 + n_components) + " or " +
                      std::to_string(1 + 2 * n_components) + " columns");
      }
    } else if (cols.size() != columns) {
      throw IoError(path + ":" + std::to_string(lineno) + ": inconsistent column count");
    }
    if (!xs.empty() && !(cols[0] > xs.back())) {
      throw IoError(path + ":" + std::to_string(lineno) + ": x values must be increasing");
    }
    xs.push_back(cols[0]);
    const bool complex_cols = columns == 1 + 2 * n_components;
    for (std::size_t c = 0; c < n_components; ++c) {
      values[c].push_back(complex_cols ? Complex(cols[1 + 2 * c], cols[2 + 2 * c])
                                       : Complex(cols[1 + c], 0.0));
    }
  }
  if (xs.size() < 2) throw IoError(path + ": need at least two data rows");

  InitialCondition ic;
  ic.name = "file";
  ic.n_components = n_components;
  ic.evaluator = [xs = std::move(xs), values = std::move(values)](double x, std::span<Complex> out) {
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (x <= xs.front()) {
        out[c] = values[c].front();
      } else if (x >= xs.back()) {
        out[c] = values[c].back();
      } else {
        const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        const std::size_t lo = hi - 1;
        const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
        out[c] = (1.0 - w) * values[c][lo] + w * values[c][hi];
      }
    }
  };
  return ic;
}

}  // namespace wnwe

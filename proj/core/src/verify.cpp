#include "wnwe/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "wnwe/diagnostics.hpp"
#include "wnwe/error.hpp"
#include "wnwe/runner.hpp"
#include "wnwe/snapshot.hpp"

namespace wnwe {

namespace {

namespace fs = std::filesystem;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

CheckResult cayley_unitarity(const VerifyOptions& options) {
  const SpectralGrid grid = make_grid(1024, kTwoPi);
  const std::vector<EquationSystem> systems = {kdv_system(1, 1), nls_system(1, 1), nls_system(1, 2),
                                               sge_system()};
  double worst = 0.0;
  for (const auto& sys : systems) {
    for (double dt : {1e-4, 1e-2, 1.0}) {
      Multipliers m = build_multipliers(sys, grid, dt);
      if (options.multiplier_hook) options.multiplier_hook(m);
      for (const auto& comp : m.c_hat) {
        for (const auto& c : comp) worst = std::max(worst, std::abs(std::abs(c) - 1.0));
      }
    }
  }
  return {"cayley_unitarity", worst <= 1e-14, "max ||c_hat|-1| = " + sci(worst), "<= 1e-14"};
}

CheckResult scaling_exponent() {
  const SpectralGrid grid = make_grid(512, kTwoPi);
  const std::vector<double> dts = logspace(1e-4, 1e-2, 8);
  const ScalingFit kdv = fit_scaling_exponent(kdv_system(1, 1), grid, dts);
  const ScalingFit nls = fit_scaling_exponent(nls_system(1, 1), grid, dts);
  const ScalingFit sge = fit_scaling_exponent(sge_system(), grid, dts);
  const double closed = std::pow(2.0, -2.0 / 3.0) / std::sqrt(3.0);
  double worst_rel = 0.0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double d = dts[i] / 2.0;
    const double predicted = closed * std::pow(d, 2.0 / 3.0);
    worst_rel = std::max(worst_rel, std::abs(kdv.norm_values[i] - predicted) / predicted);
  }
  const bool ok = std::abs(kdv.slope - 2.0 / 3.0) <= 0.03 && std::abs(nls.slope - 1.0) <= 0.02 &&
                  std::abs(sge.slope - 1.0) <= 0.02 && worst_rel < 0.02;
  std::ostringstream m;
  m.precision(5);
  m << "slopes kdv=" << kdv.slope << " nls=" << nls.slope << " sge=" << sge.slope
    << ", kdv closed-form rel err=" << sci(worst_rel);
  return {"scaling_exponent", ok, m.str(), "0.667+-0.03, 1+-0.02, 1+-0.02, < 2%"};
}

double max_ratio_nls(double dt, std::size_t steps, bool& all_below_one) {
  const SpectralGrid grid = make_grid(1024, kTwoPi);
  const InitialCondition ic = initial_condition("nls_sech", {{"b", 3.0}, {"nu", 2.0}});
  SolverSession session(nls_system(1, 2), grid, StepConfig::fixed(dt, 3), ic.sample(grid));
  double worst = 0.0;
  all_below_one = true;
  for (std::size_t i = 0; i < steps; ++i) {
    const IterationStats& s = session.step();
    for (double r : s.ratios) {
      worst = std::max(worst, r);
      if (!(r < 1.0)) all_below_one = false;
    }
  }
  return worst;
}

CheckResult contraction() {
  bool coarse_ok = false;
  bool fine_ok = false;
  const double coarse = max_ratio_nls(0.01, 100, coarse_ok);
  const double fine = max_ratio_nls(0.005, 100, fine_ok);
  return {"contraction", coarse_ok && fine < coarse,
          "max ratio dt=0.01: " + sci(coarse) + ", dt=0.005: " + sci(fine),
          "all < 1 and decreasing with dt"};
}

std::vector<CheckResult> soliton_checks(bool fast) {
  std::vector<CheckResult> out;
  const SolitonCase setup;
  const SolitonResult fine = run_soliton_case(setup, 1e-3);
  out.push_back({"nls_soliton_error", fine.error.linf < 1e-4, "linf = " + sci(fine.error.linf), "< 1e-4"});
  if (!fast) {
    const SolitonResult coarse = run_soliton_case(setup, 2e-3);
    const double order = observed_order(coarse.error.linf, fine.error.linf);
    out.push_back({"nls_temporal_order", order >= 1.8 && order <= 2.2,
                   "order = " + std::to_string(order), "[1.8, 2.2]"});
  }
  const double mass_err = std::abs(fine.initial_mass - 2.0);
  out.push_back({"nls_mass", fine.max_mass_drift < 1e-6 && mass_err < 1e-6,
                 "drift = " + sci(fine.max_mass_drift) + ", |m0-2| = " + sci(mass_err),
                 "< 1e-6, < 1e-6"});
  return out;
}

CheckResult kdv_conservation() {
  const SpectralGrid grid = make_grid(512, 20.0);
  const EquationSystem sys = kdv_system(0.05, 1.0);
  const InitialCondition ic = initial_condition("kdv_gaussian", {{"period", 20.0}});
  SolverSession session(sys, grid, StepConfig::fixed(0.01, 3), ic.sample(grid));
  auto max_abs = [](const Field& f) {
    double m = 0.0;
    for (const auto& v : f[0]) m = std::max(m, std::abs(v));
    return m;
  };
  const double u0_max = max_abs(session.state());
  const NamedValues inv0 = invariants(sys, session.state(), grid);
  const double m0 = value_of(inv0, "integral_u");
  const double e0 = value_of(inv0, "integral_u2");
  double mean_drift = 0.0, l2_drift = 0.0, peak = 0.0;
  bool finite = true;
  integrate(session, 5.0, [&](const ObservedState& s) {
    const NamedValues inv = invariants(sys, s.state, grid);
    mean_drift = std::max(mean_drift, std::abs(value_of(inv, "integral_u") - m0) / std::abs(m0));
    l2_drift = std::max(l2_drift, std::abs(value_of(inv, "integral_u2") - e0) / e0);
    peak = std::max(peak, max_abs(s.state));
    finite = finite && all_finite(s.state);
  });
  const bool ok = session.step_count() == 500 && mean_drift <= 1e-12 && l2_drift < 1e-4 && finite &&
                  peak < 5.0 * u0_max;
  return {"kdv_conservation", ok,
          "steps=" + std::to_string(session.step_count()) + ", int u drift=" + sci(mean_drift) +
              ", int u^2 drift=" + sci(l2_drift) + ", max|u|/max|u0|=" + sci(peak / u0_max),
          "500, <= 1e-12, < 1e-4, < 5"};
}

CheckResult sge_residual() {
  const SpectralGrid grid = make_grid(256, kTwoPi);
  const InitialCondition ic = initial_condition("sge_sine", {{"amplitude", 0.1}, {"wavenumber", 1.0}});
  const double dt = 1e-3;
  SolverSession session(sge_system(), grid, StepConfig::fixed(dt, 3), ic.sample(grid));
  std::vector<ComplexVector> window;
  for (std::size_t i = 1; i <= 101; ++i) {
    session.step();
    if (i >= 99) window.push_back(sge_reconstruct(session.state()[0], session.state()[1]));
  }
  const ComplexVector r = pde_residual_second_order(window, dt, grid, [](Complex u) { return std::sin(u); });
  double worst = 0.0;
  for (const auto& v : r) worst = std::max(worst, std::abs(v));
  return {"sge_residual", worst < 1e-3, "max residual at t=0.1: " + sci(worst), "< 1e-3"};
}

CheckResult validation_rejections() {
  auto rejects = [](const EquationSystem& sys, ValidationFailure want) {
    try {
      validate_system(sys);
    } catch (const ValidationError& e) {
      return e.failure() == want;
    }
    return false;
  };
  EquationSystem even = kdv_system(1, 1);
  even.linear = {SymbolPolynomial::monomial(1.0, 2)};
  EquationSystem high_m = kdv_system(1, 1);
  high_m.nonlinear = {SymbolPolynomial::monomial(1.0, 3)};
  EquationSystem shifted = kdv_system(1, 1);
  shifted.nonlinearity = [](std::span<const Complex> in, std::span<Complex> out) {
    out[0] = in[0] * in[0] + 1.0;
  };
  const bool a = rejects(even, ValidationFailure::kNotSkewAdjoint);
  const bool b = rejects(high_m, ValidationFailure::kNonlinearDegreeTooHigh);
  const bool c = rejects(shifted, ValidationFailure::kNonzeroAtOrigin);
  return {"validation_rejections", a && b && c,
          std::string("L=X^2 ") + (a ? "rejected" : "accepted") + ", deg M=ell " +
              (b ? "rejected" : "accepted") + ", G(0)!=0 " + (c ? "rejected" : "accepted"),
          "all rejected"};
}

CheckResult spectral_core() {
  const SpectralGrid grid = make_grid(1024, kTwoPi);
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal;
  ComplexVector f(grid.size());
  for (auto& v : f) v = Complex(normal(rng), normal(rng));
  const ComplexVector fh = dft_forward(f, grid);
  const ComplexVector back = dft_inverse(fh, grid);
  double err = 0.0, scale = 0.0, energy = 0.0, spec_energy = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    err = std::max(err, std::abs(back[j] - f[j]));
    scale = std::max(scale, std::abs(f[j]));
    energy += std::norm(f[j]);
    spec_energy += std::norm(fh[j]);
  }
  const double roundtrip = err / scale;
  const double parseval = std::abs(energy - spec_energy / static_cast<double>(grid.size())) / energy;

  ComplexVector s(grid.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::sin(grid.sample_points()[j]);
  const Spectrum ds =
      apply_multiplier(Spectrum({dft_forward(s, grid)}), derivative_symbol(grid));
  const ComplexVector d = dft_inverse(ds[0], grid);
  double deriv = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    deriv = std::max(deriv, std::abs(d[j] - std::cos(grid.sample_points()[j])));
  }
  return {"spectral_core", roundtrip < 1e-12 && parseval < 1e-12 && deriv < 1e-12,
          "roundtrip=" + sci(roundtrip) + ", parseval=" + sci(parseval) + ", d/dx sin=" + sci(deriv),
          "all < 1e-12"};
}

CheckResult zero_solution() {
  bool ok = true;
  for (const auto& sys : {kdv_system(1, 1), nls_system(1, 2), sge_system()}) {
    const SpectralGrid grid = make_grid(128, kTwoPi);
    SolverSession session(sys, grid, StepConfig::fixed(0.01, 3), Field(sys.n_components(), grid.size()));
    for (int i = 0; i < 1000; ++i) session.step();
    for (const auto& comp : session.state().components) {
      for (const auto& v : comp) ok = ok && v == Complex{};
    }
  }
  return {"zero_solution", ok, ok ? "all samples exactly 0 after 1000 steps" : "nonzero sample found",
          "exactly 0"};
}

bool same_bits(const Field& a, const Field& b) {
  if (a.n_components() != b.n_components()) return false;
  for (std::size_t c = 0; c < a.n_components(); ++c) {
    if (a[c].size() != b[c].size()) return false;
    for (std::size_t j = 0; j < a[c].size(); ++j) {
      if (std::bit_cast<std::uint64_t>(a[c][j].real()) != std::bit_cast<std::uint64_t>(b[c][j].real()) ||
          std::bit_cast<std::uint64_t>(a[c][j].imag()) != std::bit_cast<std::uint64_t>(b[c][j].imag())) {
        return false;
      }
    }
  }
  return true;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CheckResult determinism_format() {
  std::random_device rd;
  const fs::path base = fs::temp_directory_path() / ("wnwe-verify-" + std::to_string(rd()));
  bool identical = true;
  std::size_t files = 0;
  for (const char* eq : {"kdv", "nls", "sge"}) {
    std::string cfg = std::string("equation = ") + eq + "\nt_end = 0.2\nsnapshot_every = 5\n";
    if (std::string(eq) == "sge") cfg += "ic = sge_sine\n";
    RunSpec a = parse_run_spec(cfg, {{"out_dir", (base / eq / "a").string()}});
    RunSpec b = parse_run_spec(cfg, {{"out_dir", (base / eq / "b").string()}});
    std::ostringstream sink;
    if (run(a, sink).exit_code != kExitOk || run(b, sink).exit_code != kExitOk) {
      identical = false;
      continue;
    }
    for (const auto& entry : fs::directory_iterator(a.out_dir)) {
      const fs::path other = fs::path(b.out_dir) / entry.path().filename();
      identical = identical && fs::exists(other) && slurp(entry.path()) == slurp(other);
      ++files;
    }
  }

  // Read-back of awkward values must be bit-exact.
  const SpectralGrid grid = make_grid(8, 3.0);
  Field f(2, grid.size());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (auto& comp : f.components) {
    for (auto& v : comp) v = Complex(uni(rng) * 1e-300, uni(rng) * 1e17);
  }
  f[0][0] = Complex(-0.0, 0.1);
  f[1][1] = Complex(std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max());
  SnapshotOptions opt;
  opt.equation = "sge";
  opt.dt = 0.01;
  const bool readback = same_bits(parse_snapshot(render_snapshot(grid, f, 0.3, opt)).state, f);

  std::error_code ec;
  fs::remove_all(base, ec);
  return {"determinism_format", identical && readback && files > 0,
          std::to_string(files) + " files compared, " + (identical ? "identical" : "DIFFER") +
              ", read-back " + (readback ? "bit-exact" : "NOT bit-exact"),
          "identical, bit-exact"};
}

template <typename F>
void guarded(std::vector<CheckResult>& out, const std::string& name, F&& check) {
  try {
    check();
  } catch (const std::exception& e) {
    out.push_back({name, false, std::string("exception: ") + e.what(), "no exception"});
  }
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport verify_suite(const VerifyOptions& options) {
  VerifyReport report;
  auto& out = report.checks;
  guarded(out, "cayley_unitarity", [&] { out.push_back(cayley_unitarity(options)); });
  guarded(out, "scaling_exponent", [&] { out.push_back(scaling_exponent()); });
  guarded(out, "contraction", [&] { out.push_back(contraction()); });
  guarded(out, "nls_soliton", [&] {
    for (auto& c : soliton_checks(options.fast)) out.push_back(std::move(c));
  });
  guarded(out, "kdv_conservation", [&] { out.push_back(kdv_conservation()); });
  guarded(out, "sge_residual", [&] { out.push_back(sge_residual()); });
  guarded(out, "validation_rejections", [&] { out.push_back(validation_rejections()); });
  guarded(out, "spectral_core", [&] { out.push_back(spectral_core()); });
  guarded(out, "zero_solution", [&] { out.push_back(zero_solution()); });
  guarded(out, "determinism_format", [&] { out.push_back(determinism_format()); });
  return report;
}

void print_report(const VerifyReport& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.measured << " (expected " << c.expected
        << ")\n";
  }
  const auto passed = std::count_if(report.checks.begin(), report.checks.end(),
                                    [](const CheckResult& c) { return c.passed; });
  out << passed << "/" << report.checks.size() << " checks passed\n";
}

}  // namespace wnwe

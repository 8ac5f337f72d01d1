#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wnwe/equations.hpp"
#include "wnwe/error.hpp"
#include "wnwe/spectral.hpp"
#include "wnwe/stepper.hpp"

using namespace wnwe;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

EquationSystem linear_only() {
  EquationSystem sys = nls_system(1.0, 1.0);
  sys.name = "linear";
  sys.nonlinearity = [](std::span<const Complex>, std::span<Complex> out) {
    for (auto& v : out) v = 0.0;
  };
  return sys;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.n_components(); ++c) {
    for (std::size_t j = 0; j < a[c].size(); ++j) m = std::max(m, std::abs(a[c][j] - b[c][j]));
  }
  return m;
}

// L(D)u + M(D)G(u) evaluated mode by mode.
Field rhs(const EquationSystem& sys, const SpectralGrid& g, const Field& u) {
  const Spectrum uh = dft_forward(u, g);
  const Spectrum gh = dft_forward(eval_nonlinearity(sys, u), g);
  Spectrum out(u.n_components(), g.size());
  for (std::size_t c = 0; c < u.n_components(); ++c) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double k = g.wavenumbers()[j];
      out[c][j] = sys.linear[c].at_wavenumber(k) * uh[c][j] + sys.nonlinear[c].at_wavenumber(k) * gh[c][j];
    }
  }
  return dft_inverse(out, g);
}

struct Case {
  EquationSystem sys;
  SpectralGrid grid;
  Field initial;
};

std::vector<Case> builtin_cases() {
  std::vector<Case> cases;
  {
    SpectralGrid g = make_grid(512, 20.0);
    cases.push_back({kdv_system(0.05, 1.0), g,
                     initial_condition("kdv_gaussian", {{"period", 20.0}}).sample(g)});
  }
  {
    SpectralGrid g = make_grid(1024, 2 * kPi);
    cases.push_back({nls_system(1.0, 2.0), g,
                     initial_condition("nls_sech", {{"b", 3.0}, {"nu", 2.0}}).sample(g)});
  }
  {
    SpectralGrid g = make_grid(256, 2 * kPi);
    cases.push_back({sge_system(), g,
                     initial_condition("sge_sine", {{"amplitude", 1.0}, {"wavenumber", 1.0}}).sample(g)});
  }
  return cases;
}

}  // namespace

TEST_CASE("nyquist policy names") {
  CHECK(std::string(to_string(NyquistPolicy::kKeep)) == "paper");
  CHECK(parse_nyquist_policy("zero") == NyquistPolicy::kZero);
  CHECK(parse_nyquist_policy("paper") == NyquistPolicy::kKeep);
  CHECK_FALSE(parse_nyquist_policy("Zero").has_value());
}

TEST_CASE("KdV multipliers at kappa = 1, dt = 0.01") {
  const SpectralGrid g = make_grid(64, 2 * kPi);
  const Multipliers m = build_multipliers(kdv_system(0.05, 1.0), g, 0.01);
  CHECK(m.d == 0.005);
  // L(i) = -0.05 (i)^3 = 0.05 i; M(i) = -0.5 i.
  const Complex dl(0.0, 0.005 * 0.05);
  const Complex c = (1.0 + dl) / (1.0 - dl);
  const Complex b = 0.005 * Complex(0.0, -0.5) / (1.0 - dl);
  CHECK(std::abs(m.c_hat[0][1] - c) < 1e-15);
  CHECK(std::abs(m.b_hat[0][1] - b) < 1e-15);
  CHECK(m.c_hat[0][0] == Complex(1.0));
  CHECK(m.b_hat[0][0] == Complex{});
}

TEST_CASE("NLS filter modulus has a closed form") {
  const double mu = 1.3, nu = 2.0, dt = 0.02, d = dt / 2;
  const SpectralGrid g = make_grid(128, 10.0);
  const Multipliers m = build_multipliers(nls_system(mu, nu), g, dt);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double k = g.wavenumbers()[j];
    const double expected = d * nu / std::sqrt(1.0 + d * d * mu * mu * k * k * k * k);
    CHECK(std::abs(std::abs(m.b_hat[0][j]) - expected) < 1e-15);
  }
}

TEST_CASE("Cayley factor has unit modulus for every skew-adjoint symbol (property)") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-5.0, 5.0), udt(1e-6, 10.0);
  const SpectralGrid g = make_grid(256, 13.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t ell = 1 + rng() % 5;
    std::vector<Complex> a(ell + 1);
    for (std::size_t m = 1; m <= ell; ++m) {
      a[m] = m % 2 == 1 ? Complex(coef(rng), 0.0) : Complex(0.0, coef(rng));
    }
    if (a[ell] == Complex{}) a[ell] = ell % 2 == 1 ? Complex(1.0) : kI;
    EquationSystem sys = linear_only();
    sys.linear[0] = SymbolPolynomial(a);
    sys.nonlinear[0] = SymbolPolynomial();
    const double dt = trial == 0 ? 10.0 : udt(rng);
    for (auto policy : {NyquistPolicy::kKeep, NyquistPolicy::kZero}) {
      const Multipliers m = build_multipliers(sys, g, dt, policy);
      for (const auto& c : m.c_hat[0]) CHECK(std::abs(std::abs(c) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("nyquist zero policy") {
  const SpectralGrid g = make_grid(32, 2 * kPi);
  const std::size_t nyq = g.nyquist_index();

  const auto kdv = kdv_system(0.05, 1.0);
  const Multipliers keep = build_multipliers(kdv, g, 0.1, NyquistPolicy::kKeep);
  const Multipliers zero = build_multipliers(kdv, g, 0.1, NyquistPolicy::kZero);
  CHECK(zero.c_hat[0][nyq] == Complex(1.0));
  CHECK(zero.b_hat[0][nyq] == Complex{});
  CHECK(keep.c_hat[0][nyq] != Complex(1.0));
  CHECK(keep.b_hat[0][nyq] != Complex{});
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j == nyq) continue;
    CHECK(zero.c_hat[0][j] == keep.c_hat[0][j]);
    CHECK(zero.b_hat[0][j] == keep.b_hat[0][j]);
  }

  // An even symbol keeps its Nyquist Cayley factor.
  const auto nls = nls_system(1.0, 2.0);
  CHECK(build_multipliers(nls, g, 0.1, NyquistPolicy::kZero).c_hat[0][nyq] ==
        build_multipliers(nls, g, 0.1, NyquistPolicy::kKeep).c_hat[0][nyq]);
}

TEST_CASE("apply_H with G = 0 is the Cayley factor") {
  const SpectralGrid g = make_grid(16, 2 * kPi);
  Field u(1, 16);
  for (std::size_t j = 0; j < 16; ++j) u[0][j] = std::polar(1.0, g.sample_points()[j]);
  SolverSession s(linear_only(), g, StepConfig::fixed(0.1), u);
  const Complex c = s.multipliers().c_hat[0][1];
  const StepPrecomputed pre = s.precompute();
  Field junk(1, 16);
  junk[0][3] = 42.0;
  for (const Field& w : {u, junk}) {
    const Field h = apply_H(s, w, pre);
    for (std::size_t j = 0; j < 16; ++j) CHECK(std::abs(h[0][j] - c * u[0][j]) < 1e-14);
  }
}

TEST_CASE("apply_H on a constant NLS state") {
  const double dt = 0.01, nu = 2.0, d = dt / 2;
  const Complex c(0.3, -0.4);
  const SpectralGrid g = make_grid(8, 2 * kPi);
  const Field u({ComplexVector(8, c)});
  SolverSession s(nls_system(1.0, nu), g, StepConfig::fixed(dt), u);
  const Field h = apply_H(s, u, s.precompute());
  const Complex expected = c + 2.0 * kI * d * nu * std::norm(c) * c;
  for (const auto& v : h[0]) CHECK(std::abs(v - expected) < 1e-15);
}

TEST_CASE("the zero state stays exactly zero") {
  for (auto& cs : builtin_cases()) {
    const Field zero(cs.sys.n_components(), cs.grid.size());
    SolverSession s(cs.sys, cs.grid, StepConfig::fixed(0.01), zero);
    for (int i = 0; i < 10; ++i) s.step();
    CHECK(s.state() == zero);
  }
}

TEST_CASE("linear flow matches powers of the Cayley factor") {
  const SpectralGrid g = make_grid(64, 2 * kPi);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  Field u(1, 64);
  for (auto& v : u[0]) v = Complex(normal(rng), normal(rng));
  SolverSession s(linear_only(), g, StepConfig::fixed(0.05), u);
  const double n0 = discrete_l2_norm(u);
  const int n = 200;
  for (int i = 0; i < n; ++i) s.step();
  CHECK(std::abs(discrete_l2_norm(s.state()) - n0) / n0 < 1e-13);

  Spectrum expected = dft_forward(u, g);
  for (std::size_t j = 0; j < 64; ++j) expected[0][j] *= std::pow(s.multipliers().c_hat[0][j], n);
  CHECK(max_diff(s.state(), dft_inverse(expected, g)) < 1e-12);
}

TEST_CASE("converged steps satisfy the trapezoidal relation") {
  for (auto& cs : builtin_cases()) {
    const double dt = 0.005;
    SolverSession s(cs.sys, cs.grid, StepConfig::converged(dt, 1e-13, 50), cs.initial);
    const Field u0 = s.state();
    s.step();
    const Field& u1 = s.state();
    const Field f0 = rhs(cs.sys, cs.grid, u0);
    const Field f1 = rhs(cs.sys, cs.grid, u1);
    double worst = 0.0, scale = 0.0;
    for (std::size_t c = 0; c < u0.n_components(); ++c) {
      for (std::size_t j = 0; j < cs.grid.size(); ++j) {
        const Complex lhs = (u1[c][j] - u0[c][j]) / dt;
        const Complex mid = 0.5 * (f0[c][j] + f1[c][j]);
        worst = std::max(worst, std::abs(lhs - mid));
        scale = std::max(scale, std::abs(mid));
      }
    }
    INFO(cs.sys.name);
    CHECK(worst / std::max(1.0, scale) < 1e-9);
  }
}

TEST_CASE("KdV keeps its mean") {
  auto cs = builtin_cases()[0];
  SolverSession s(cs.sys, cs.grid, StepConfig::fixed(0.01), cs.initial);
  const Complex m0 = dft_forward(cs.initial, cs.grid)[0][0];
  for (int i = 0; i < 100; ++i) s.step();
  const Complex m1 = dft_forward(s.state(), cs.grid)[0][0];
  CHECK(std::abs(m1 - m0) / std::abs(m0) < 1e-13);
}

TEST_CASE("contraction ratios shrink with dt") {
  for (auto& cs : builtin_cases()) {
    std::vector<double> ratios;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
      SolverSession s(cs.sys, cs.grid, StepConfig::fixed(dt), cs.initial);
      double worst = 0.0;
      for (int i = 0; i < 5; ++i) worst = std::max(worst, s.step().max_ratio());
      ratios.push_back(worst);
    }
    INFO(cs.sys.name);
    CHECK(ratios[0] < 1.0);
    CHECK(ratios[1] < ratios[0]);
    CHECK(ratios[2] < ratios[1]);
  }
}

TEST_CASE("iteration statistics") {
  auto cs = builtin_cases()[1];
  SolverSession fixed(cs.sys, cs.grid, StepConfig::fixed(0.01, 4), cs.initial);
  const IterationStats& st = fixed.step();
  CHECK(st.iterations == 4);
  CHECK(st.deltas.size() == 4);
  CHECK(st.ratios.size() == 3);
  for (std::size_t j = 0; j < st.ratios.size(); ++j) {
    CHECK(st.ratios[j] == doctest::Approx(st.deltas[j + 1] / st.deltas[j]));
  }
  CHECK(IterationStats{}.max_ratio() == 0.0);

  SolverSession tol(cs.sys, cs.grid, StepConfig::converged(0.01, 1e-12), cs.initial);
  const IterationStats& ts = tol.step();
  CHECK(ts.iterations < 25);
  CHECK(ts.deltas.back() <= 1e-12 * std::max(1.0, discrete_l2_norm(tol.state())) * 1.0001);
}

TEST_CASE("integrate step and observation counts") {
  auto cs = builtin_cases()[0];
  {
    SolverSession s(cs.sys, cs.grid, StepConfig::fixed(0.01), cs.initial);
    std::size_t seen = 0;
    const auto sum = integrate(s, 0.0, [&](const ObservedState& o) {
      CHECK(o.stats == nullptr);
      ++seen;
    });
    CHECK(sum.steps == 0);
    CHECK(seen == 1);
    CHECK(s.state() == cs.initial);
  }
  {
    SolverSession s(cs.sys, cs.grid, StepConfig::fixed(0.01), cs.initial);
    std::vector<std::size_t> steps;
    std::vector<double> times;
    const auto sum = integrate(
        s, 5.0,
        [&](const ObservedState& o) {
          steps.push_back(o.step);
          times.push_back(o.time);
        },
        10);
    CHECK(sum.steps == 500);
    CHECK(sum.snapshots == 51);
    CHECK(sum.final_time == 5.0);
    CHECK(sum.total_iterations == 1500);
    CHECK(steps.size() == 51);
    CHECK(steps.back() == 500);
    CHECK(times[17] == 170 * 0.01);
  }
  {
    SolverSession s(cs.sys, cs.grid, StepConfig::fixed(0.01), cs.initial);
    CHECK_THROWS_AS(integrate(s, 1.0, {}, 0), InvalidArgument);
    integrate(s, 0.5);
    CHECK_THROWS_AS(integrate(s, 0.2), InvalidArgument);
  }
}

TEST_CASE("time is a product, and survives a dt change") {
  auto cs = builtin_cases()[1];
  SolverSession s(cs.sys, cs.grid, StepConfig::fixed(0.01), cs.initial, 2.0);
  for (int i = 0; i < 7; ++i) s.step();
  CHECK(s.time() == 2.0 + 7 * 0.01);

  const Multiplier before = s.multipliers().c_hat;
  StepConfig same = s.config();
  same.iterations = 5;
  s.set_config(same);
  CHECK(s.multipliers().c_hat == before);
  CHECK(s.time() == 2.0 + 7 * 0.01);

  s.set_config(StepConfig::fixed(0.001));
  CHECK(s.multipliers().c_hat == build_multipliers(cs.sys, cs.grid, 0.001).c_hat);
  for (int i = 0; i < 3; ++i) s.step();
  CHECK(s.time() == (2.0 + 7 * 0.01) + 3 * 0.001);
  CHECK(s.step_count() == 10);
}

TEST_CASE("large steps diverge and leave the session intact") {
  auto cs = builtin_cases()[1];
  SolverSession s(cs.sys, cs.grid, StepConfig::fixed(10.0), cs.initial);
  Field last = s.state();
  bool thrown = false;
  try {
    for (int i = 0; i < 10; ++i) {
      last = s.state();
      s.step();
    }
  } catch (const DivergenceError& e) {
    thrown = true;
    CHECK(e.step_index() == s.step_count());
    CHECK(s.state() == last);
  }
  CHECK(thrown);
}

TEST_CASE("tolerance mode reports non-convergence") {
  auto cs = builtin_cases()[1];
  SolverSession s(cs.sys, cs.grid, StepConfig::converged(0.01, 1e-15, 2), cs.initial);
  CHECK_THROWS_AS(s.step(), ConvergenceError);
  CHECK(s.step_count() == 0);
  CHECK(s.state() == cs.initial);
}

TEST_CASE("session construction errors") {
  auto cs = builtin_cases()[2];
  CHECK_THROWS_AS(SolverSession(cs.sys, cs.grid, StepConfig::fixed(0.0), cs.initial), InvalidArgument);
  CHECK_THROWS_AS(SolverSession(cs.sys, cs.grid, StepConfig::fixed(0.01, 0), cs.initial), InvalidArgument);
  CHECK_THROWS_AS(SolverSession(cs.sys, cs.grid, StepConfig::fixed(0.01), Field(1, cs.grid.size())),
                  ShapeMismatch);
  CHECK_THROWS_AS(SolverSession(cs.sys, cs.grid, StepConfig::fixed(0.01), Field(2, 8)), ShapeMismatch);
  Field bad = cs.initial;
  bad[1][3] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(SolverSession(cs.sys, cs.grid, StepConfig::fixed(0.01), bad), InvalidArgument);
  auto broken = cs.sys;
  broken.linear[1] = SymbolPolynomial::monomial(1.0, 2);
  CHECK_THROWS_AS(SolverSession(broken, cs.grid, StepConfig::fixed(0.01), cs.initial), ValidationError);
}

TEST_CASE("stepping is deterministic") {
  for (auto& cs : builtin_cases()) {
    SolverSession a(cs.sys, cs.grid, StepConfig::fixed(0.01), cs.initial);
    SolverSession b(cs.sys, cs.grid, StepConfig::fixed(0.01), cs.initial);
    for (int i = 0; i < 20; ++i) {
      a.step();
      b.step();
    }
    CHECK(a.state() == b.state());
  }
}

// wnwe: integrate weakly nonlinear wave equations and check the scheme.
//
//   wnwe run [--config FILE] [--force] [--key value ...]
//   wnwe verify [--scope all|fast]
//   wnwe norm-scan --equation kdv|nls|sge [--n N] [--period P] ...
//   wnwe soliton-error [--dt 2e-3,1e-3,...] ...

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wnwe/diagnostics.hpp"
#include "wnwe/error.hpp"
#include "wnwe/run_spec.hpp"
#include "wnwe/runner.hpp"
#include "wnwe/verify.hpp"

namespace {

wnwe::FlagOverrides pair_extras(const std::vector<std::string>& extras) {
  wnwe::FlagOverrides out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string arg = extras[i];
    if (!arg.starts_with("--")) throw wnwe::ConfigError(arg, 0, "unexpected argument '" + arg + "'");
    arg.erase(0, 2);
    if (const auto eq = arg.find('='); eq != std::string::npos) {
      out.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw wnwe::ConfigError(arg, 0, "flag --" + arg + " needs a value");
    out.emplace_back(arg, extras[++i]);
  }
  return out;
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return wnwe::kExitIo;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral trapezoidal stepping for weakly nonlinear wave equations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wnwe::version());

  auto* run_cmd = app.add_subcommand("run", "Integrate an equation and write snapshots");
  std::string config_path;
  bool force = false;
  run_cmd->add_option("--config", config_path, "key = value configuration file");
  run_cmd->add_flag("--force", force, "Replace existing outputs in out_dir");
  run_cmd->allow_extras();
  run_cmd->footer("Any configuration key may be given as --key value and overrides the file.");

  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in acceptance checks");
  std::string scope = "all";
  verify_cmd->add_option("--scope", scope, "all or fast (fast skips the convergence study)")
      ->check(CLI::IsMember({"all", "fast"}));

  auto* scan_cmd = app.add_subcommand("norm-scan", "Sweep the filter-operator norm over dt");
  std::string scan_eq = "kdv";
  double scan_eps = 1.0, scan_beta = 1.0, scan_mu = 1.0, scan_nu = 1.0;
  std::size_t scan_n = 512, scan_points = 8;
  double scan_period = 2.0 * std::numbers::pi, dt_min = 1e-4, dt_max = 1e-2;
  std::string scan_out;
  scan_cmd->add_option("--equation", scan_eq)->check(CLI::IsMember({"kdv", "nls", "sge"}));
  scan_cmd->add_option("--epsilon", scan_eps);
  scan_cmd->add_option("--beta", scan_beta);
  scan_cmd->add_option("--mu", scan_mu);
  scan_cmd->add_option("--nu", scan_nu);
  scan_cmd->add_option("--n", scan_n);
  scan_cmd->add_option("--period", scan_period);
  scan_cmd->add_option("--dt-min", dt_min);
  scan_cmd->add_option("--dt-max", dt_max);
  scan_cmd->add_option("--points", scan_points);
  scan_cmd->add_option("--out", scan_out, "CSV output path (default stdout)");

  auto* sol_cmd = app.add_subcommand("soliton-error", "NLS envelope-soliton accuracy study");
  wnwe::SolitonCase sol;
  std::vector<double> sol_dts = {4e-3, 2e-3, 1e-3};
  std::string sol_out;
  sol_cmd->add_option("--mu", sol.mu);
  sol_cmd->add_option("--nu", sol.nu);
  sol_cmd->add_option("--a", sol.a);
  sol_cmd->add_option("--v", sol.v);
  sol_cmd->add_option("--period", sol.period);
  sol_cmd->add_option("--n", sol.n_points);
  sol_cmd->add_option("--t-end", sol.t_end);
  sol_cmd->add_option("--tolerance", sol.tolerance);
  sol_cmd->add_option("--dt", sol_dts, "Comma-separated step sizes")->delimiter(',');
  sol_cmd->add_option("--out", sol_out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      std::string text;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
          std::cerr << "error: cannot read config '" << config_path << "'\n";
          return wnwe::kExitIo;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
      }
      wnwe::FlagOverrides overrides = pair_extras(run_cmd->remaining());
      if (force) overrides.emplace_back("force", "true");
      const wnwe::RunSpec spec = wnwe::parse_run_spec(text, overrides);
      return wnwe::run(spec, std::cerr).exit_code;
    }
    if (*verify_cmd) {
      wnwe::VerifyOptions options;
      options.fast = scope == "fast";
      const wnwe::VerifyReport report = wnwe::verify_suite(options);
      wnwe::print_report(report, std::cout);
      return report.all_passed() ? 0 : 1;
    }
    if (*scan_cmd) {
      const wnwe::EquationSystem sys = scan_eq == "kdv"   ? wnwe::kdv_system(scan_eps, scan_beta)
                                       : scan_eq == "nls" ? wnwe::nls_system(scan_mu, scan_nu)
                                                          : wnwe::sge_system();
      const wnwe::SpectralGrid grid = wnwe::make_grid(scan_n, scan_period);
      const std::vector<double> dts = wnwe::logspace(dt_min, dt_max, scan_points);
      const int rc = emit(wnwe::norm_scan_csv(sys, grid, dts), scan_out);
      try {
        const wnwe::ScalingFit fit = wnwe::fit_scaling_exponent(sys, grid, dts);
        std::cerr << "fitted slope " << fit.slope << ", expected q/ell = " << fit.expected_slope << '\n';
      } catch (const wnwe::InvalidArgument& e) {
        std::cerr << "no fit: " << e.what() << '\n';
      }
      return rc;
    }
    if (*sol_cmd) {
      return emit(wnwe::soliton_error_csv(sol, sol_dts), sol_out);
    }
  } catch (const wnwe::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wnwe::kExitInvalidSpec;
  } catch (const wnwe::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wnwe::kExitIo;
  } catch (const wnwe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wnwe::kExitInvalidSpec;
  }
  return 0;
}

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "covlab/bounds.hpp"
#include "covlab/harness.hpp"
#include "covlab/oracle.hpp"

namespace {

using covlab::DistKind;

covlab::DistKind parse_dist(const std::string& name) {
  const auto kind = covlab::dist_from_name(name);
  if (!kind) throw covlab::ConfigError("unknown distribution '" + name + "'");
  return *kind;
}

int run_spectra(int d, int grid_count) {
  std::printf("t,r_sigma,r_sigma2,tr,tr2\n");
  for (double t : covlab::parameter_grid(grid_count)) {
    const covlab::Spectrum lambda = covlab::lambda_profile(t, d);
    const covlab::SpectralFunctionals s(lambda);
    std::printf("%s,%s,%s,%s,%s\n", covlab::format_double(t).c_str(),
                covlab::format_double(s.r1()).c_str(),
                covlab::format_double(s.r2()).c_str(),
                covlab::format_double(s.tr).c_str(),
                covlab::format_double(s.tr2).c_str());
  }
  return 0;
}

struct BoundsOptions {
  int d = 50;
  double t = 0.5;
  std::optional<double> tau;
  std::optional<double> rho_max;
  std::optional<double> omega;
  std::optional<double> alpha;
  double delta = 0.05;
  long n = 1000;
  bool json = false;
  bool moments = false;
  bool estimate = false;
  std::string dist = "trunc_laplace";
  std::uint64_t seed = 0;
};

int run_bounds(const BoundsOptions& opt) {
  const covlab::Spectrum lambda = covlab::lambda_profile(opt.t, opt.d);

  if (opt.moments) {
    std::printf("kind,n,t,expected_frob_sq\n");
    for (DistKind kind :
         {DistKind::TruncLaplace, DistKind::UniformSphere, DistKind::Gaussian}) {
      const covlab::MomentReport report = covlab::expected_frob_error(lambda, kind, opt.n);
      std::printf("%s,%ld,%s,%s\n", std::string(covlab::dist_name(kind)).c_str(), opt.n,
                  covlab::format_double(opt.t).c_str(),
                  covlab::format_double(report.expected_frob_sq).c_str());
    }
    return 0;
  }

  double tau = 0.0, rho_max = 0.0, alpha = 0.0;
  if (opt.estimate) {
    const DistKind kind = parse_dist(opt.dist);
    covlab::RandomStream rng(opt.seed, 0xB0u);
    const covlab::McEstimate omega_hat =
        covlab::estimate_omega(kind, opt.d, 20000, 16, rng);
    const covlab::McEstimate alpha_hat =
        covlab::estimate_alpha(kind, opt.d, 20000, 16, rng);
    const auto pair = covlab::tau_from_omega(std::max(omega_hat.value, 1e-9));
    tau = pair.first;
    rho_max = pair.second;
    alpha = alpha_hat.value;
    std::fprintf(stderr,
                 "# empirical lower-bound estimates (not certificates): omega_hat=%g "
                 "tau_hat=%g rho_max_hat=%g alpha_hat=%g\n",
                 omega_hat.value, tau, rho_max, alpha);
  }
  if (opt.omega) {
    const auto pair = covlab::tau_from_omega(*opt.omega);
    tau = pair.first;
    rho_max = pair.second;
  }
  if (opt.tau) tau = *opt.tau;
  if (opt.rho_max) rho_max = *opt.rho_max;
  if (opt.alpha) alpha = *opt.alpha;
  if (tau <= 0.0 || alpha <= 0.0) {
    throw covlab::ConfigError(
        "bounds needs tau and alpha: pass --tau/--alpha, --omega, or --estimate");
  }
  if (rho_max <= 0.0) {
    // invert the Orlicz mapping as a fallback radius
    rho_max = covlab::tau_from_omega(std::sqrt(tau / 64.0)).second;
    std::fprintf(stderr, "# rho_max not given; derived %g from tau\n", rho_max);
  }

  const covlab::TailParams params =
      covlab::TailParams::direct(tau, rho_max, alpha, opt.delta, opt.n);
  const covlab::SpectralFunctionals s(lambda);
  const covlab::BoundReport report = covlab::evaluate_bounds(s, params);

  if (opt.json) {
    nlohmann::ordered_json out;
    out["r1"] = report.r1;
    out["r2"] = report.r2;
    out["r4"] = report.r4;
    out["R_const"] = report.radius;
    out["upper_ok"] = report.upper_ok;
    out["upper_margin1"] = report.upper_margin1;
    out["upper_margin2"] = report.upper_margin2;
    out["upper_dev"] = report.upper_dev;
    out["lower_ok"] = report.lower_ok;
    out["frakR"] = report.frak_r;
    out["lower_dev"] = report.lower_dev;
    if (std::isfinite(report.ratio_dev)) {
      out["ratio_dev"] = report.ratio_dev;
    } else {
      out["ratio_dev"] = nullptr;
    }
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
  }

  std::printf("spectrum        Lambda(t=%g, d=%d)\n", opt.t, opt.d);
  std::printf("tail constants  tau=%g rho_max=%g alpha=%g delta=%g n=%ld\n", tau,
              rho_max, alpha, opt.delta, opt.n);
  std::printf("r1              %.12g\n", report.r1);
  std::printf("r2              %.12g\n", report.r2);
  std::printf("r4              %.12g\n", report.r4);
  std::printf("R_const         %.12g\n", report.radius);
  std::printf("upper_ok        %s\n", report.upper_ok ? "true" : "false");
  std::printf("upper_margin1   %.12g\n", report.upper_margin1);
  std::printf("upper_margin2   %.12g\n", report.upper_margin2);
  std::printf("upper_dev       %.12g\n", report.upper_dev);
  std::printf("lower_ok        %s\n", report.lower_ok ? "true" : "false");
  std::printf("frakR           %.12g\n", report.frak_r);
  std::printf("lower_dev       %.12g\n", report.lower_dev);
  if (std::isfinite(report.ratio_dev)) {
    std::printf("ratio_dev       %.12g\n", report.ratio_dev);
  } else {
    std::printf("ratio_dev       n/a (effective rank is 1)\n");
  }
  return 0;
}

int run_verify(bool full, std::uint64_t seed, bool json) {
  const std::vector<covlab::VerifyResult> results = covlab::run_verify_suite(full, seed);
  bool all_pass = true;
  if (json) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const covlab::VerifyResult& r : results) {
      out.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
      all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    for (const covlab::VerifyResult& r : results) {
      std::printf("%-40s %s  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                  r.detail.c_str());
      all_pass = all_pass && r.pass;
    }
    std::printf("%-40s %s\n", "overall", all_pass ? "PASS" : "FAIL");
  }
  return all_pass ? 0 : 1;
}

int run_simulate(const std::string& config_file, std::optional<std::uint64_t> seed,
                 const std::string& out_dir, bool full, int workers) {
  covlab::ExperimentConfig config = full ? covlab::ExperimentConfig::full_profile()
                                         : covlab::ExperimentConfig::scaled_profile();
  if (!config_file.empty()) config.apply_file(config_file);
  if (seed) config.master_seed = *seed;
  if (!out_dir.empty()) config.out_dir = out_dir;
  covlab::run_and_persist(config, workers);
  std::printf("wrote %s\n", covlab::records_csv_path(config.out_dir).c_str());
  std::printf("wrote %s\n", covlab::summary_csv_path(config.out_dir).c_str());
  std::printf("wrote %s\n", covlab::metadata_json_path(config.out_dir).c_str());
  return 0;
}

int run_plot(const std::string& in_dir, std::string out_dir) {
  if (out_dir.empty()) out_dir = in_dir;
  const std::vector<covlab::SummaryRecord> summaries =
      covlab::read_summary_csv(covlab::summary_csv_path(in_dir));
  int grid_count = 0;
  {
    std::ifstream meta(covlab::metadata_json_path(in_dir));
    if (meta) {
      try {
        nlohmann::json parsed;
        meta >> parsed;
        grid_count = parsed.at("config").at("grid_count").get<int>();
      } catch (...) {
        grid_count = 0;  // fall back to spacing heuristic
      }
    }
  }
  for (const std::string& path : covlab::emit_plot(summaries, out_dir, grid_count)) {
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covlab: sample-covariance Frobenius concentration laboratory"};
  app.require_subcommand(1);

  auto* spectra = app.add_subcommand("spectra", "emit the covariance family grid as CSV");
  int spectra_d = 50;
  int spectra_grid = 70;
  spectra->add_option("--d", spectra_d, "ambient dimension");
  spectra->add_option("--grid", spectra_grid, "grid size");

  auto* bounds = app.add_subcommand("bounds", "evaluate the deviation bounds");
  BoundsOptions bounds_opt;
  bounds->add_option("--d", bounds_opt.d, "ambient dimension");
  bounds->add_option("--t", bounds_opt.t, "family parameter in [0, 1]");
  double tau_in = 0.0, rho_in = 0.0, omega_in = 0.0, alpha_in = 0.0;
  auto* tau_flag = bounds->add_option("--tau", tau_in, "fourth-moment tilt constant");
  auto* rho_flag = bounds->add_option("--rho-max", rho_in, "tilt radius");
  auto* omega_flag = bounds->add_option("--omega", omega_in, "quadratic-form psi1 constant");
  auto* alpha_flag = bounds->add_option("--alpha", alpha_in, "fourth-moment constant");
  bounds->add_option("--delta", bounds_opt.delta, "confidence parameter");
  bounds->add_option("--n", bounds_opt.n, "sample size");
  bounds->add_flag("--json", bounds_opt.json, "machine-readable output");
  bounds->add_flag("--moments", bounds_opt.moments,
                   "print closed-form expected Frobenius errors instead");
  bounds->add_flag("--estimate", bounds_opt.estimate,
                   "estimate missing constants with the Monte Carlo oracle");
  bounds->add_option("--dist", bounds_opt.dist, "distribution for --estimate");
  bounds->add_option("--seed", bounds_opt.seed, "seed for --estimate");

  auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo experiment");
  std::string sim_config;
  std::uint64_t sim_seed = 0;
  bool sim_seed_given = false;
  std::string sim_out;
  bool sim_full = false;
  int sim_workers = 0;
  simulate->add_option("--config", sim_config, "flat key=value config file");
  simulate->add_option("--seed", sim_seed, "master seed")->each([&](const std::string&) {
    sim_seed_given = true;
  });
  simulate->add_option("--out", sim_out, "output directory");
  simulate->add_flag("--full", sim_full, "reference profile (reps=5000, four sample sizes)");
  simulate->add_option("--workers", sim_workers, "worker threads (0 = hardware)");

  auto* plot = app.add_subcommand("plot", "render summary.csv as SVG");
  std::string plot_in, plot_out;
  plot->add_option("--in", plot_in, "directory holding summary.csv")->required();
  plot->add_option("--out", plot_out, "output directory (default: --in)");

  auto* verify = app.add_subcommand("verify", "run the oracle verification suite");
  bool verify_quick = false, verify_full = false, verify_json = false;
  std::uint64_t verify_seed = 0;
  verify->add_flag("--quick", verify_quick, "small replicate counts (default)");
  verify->add_flag("--full", verify_full, "large replicate counts");
  verify->add_option("--seed", verify_seed, "seed");
  verify->add_flag("--json", verify_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectra->parsed()) return run_spectra(spectra_d, spectra_grid);
    if (bounds->parsed()) {
      if (*tau_flag) bounds_opt.tau = tau_in;
      if (*rho_flag) bounds_opt.rho_max = rho_in;
      if (*omega_flag) bounds_opt.omega = omega_in;
      if (*alpha_flag) bounds_opt.alpha = alpha_in;
      return run_bounds(bounds_opt);
    }
    if (simulate->parsed()) {
      return run_simulate(sim_config,
                          sim_seed_given ? std::optional<std::uint64_t>(sim_seed)
                                         : std::nullopt,
                          sim_out, sim_full, sim_workers);
    }
    if (plot->parsed()) return run_plot(plot_in, plot_out);
    if (verify->parsed()) return run_verify(verify_full && !verify_quick, verify_seed,
                                            verify_json);
  } catch (const covlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const covlab::DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const covlab::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const covlab::IoError& e) {
    std::fprintf(stderr, "i/o failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

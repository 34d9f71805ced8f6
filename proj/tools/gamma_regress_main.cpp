// gamma-regress: command-line front end for the γ-divergence regression
// library.  Subcommands: bench (Monte Carlo MSE sweep), fit (single
// estimation from CSV), simulate (contaminated dataset generation), and
// theory (quadrature checks of the robustness claims).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gammareg/bench.hpp"
#include "gammareg/contamination.hpp"
#include "gammareg/errors.hpp"
#include "gammareg/estimator.hpp"
#include "gammareg/io.hpp"
#include "gammareg/models/gaussian_linear.hpp"
#include "gammareg/models/logistic.hpp"
#include "gammareg/models/poisson.hpp"
#include "gammareg/theory.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw gammareg::IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw gammareg::IoError("cannot open for writing: " + path);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw gammareg::IoError("write failed: " + path);
}

void emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body << '\n';
  } else {
    spill(out_path, body);
  }
}

gammareg::ExperimentConfig load_experiment_config(const std::string& path) {
  if (path.empty()) return gammareg::ExperimentConfig{};
  return gammareg::experiment_config_from_json(slurp(path));
}

const gammareg::ConditionalModel& model_by_name(const std::string& name) {
  if (name == "logistic") return gammareg::logistic_model();
  if (name == "poisson") return gammareg::poisson_model();
  if (name == "gaussian") {
    static const gammareg::GaussianLinearModel model;  // free σ
    return model;
  }
  throw gammareg::ConfigError("unknown model '" + name + "'");
}

gammareg::InitStrategy init_by_name(const std::string& name) {
  if (name == "mle") return gammareg::InitStrategy::MLEInit;
  if (name == "zero") return gammareg::InitStrategy::ZeroInit;
  if (name == "trimmed-mle") return gammareg::InitStrategy::TrimmedMLEInit;
  throw gammareg::ConfigError("unknown init '" + name + "'");
}

// ---------------------------------------------------------------------------

int run_bench(const std::string& config_path, const std::string& out_prefix,
              const std::string& format, int threads_override, bool strict) {
  gammareg::ExperimentConfig config = load_experiment_config(config_path);
  if (threads_override > 0) config.threads = threads_override;
  const gammareg::MseReport report = gammareg::run_experiment(config);

  const bool all = format == "all";
  if (all || format == "csv") {
    spill(out_prefix + ".csv",
          gammareg::emit_report(report, gammareg::ReportFormat::Csv));
  }
  if (all || format == "json") {
    spill(out_prefix + ".json",
          gammareg::emit_report(report, gammareg::ReportFormat::Json));
  }
  const std::string md =
      gammareg::emit_report(report, gammareg::ReportFormat::Markdown);
  if (all || format == "markdown") spill(out_prefix + ".md", md);
  std::cout << md;

  int failures = 0;
  for (const auto& cell : report.cells) failures += cell.failures;
  if (failures > 0) {
    std::cerr << "warning: " << failures << " fit(s) failed or did not "
              << "converge across the sweep\n";
    if (strict) return 2;
  }
  return 0;
}

int run_fit(const std::string& data_path, const std::string& model_name,
            double gamma, int type, const std::string& init_name,
            const std::string& out_path) {
  const gammareg::GeneratedData data = gammareg::read_dataset_csv(data_path);
  gammareg::FitConfig fc;
  fc.gamma = gammareg::GammaParam(gamma);
  fc.kind = type == 1 ? gammareg::EntropyKind::Type1
                      : gammareg::EntropyKind::Type2;
  fc.init = init_by_name(init_name);
  const gammareg::FitResult r =
      gammareg::fit(model_by_name(model_name), data.dataset, fc);
  const json doc{
      {"model", model_name},
      {"gamma", gamma},
      {"kind", gammareg::to_string(fc.kind)},
      {"theta_hat",
       std::vector<double>(r.theta_hat.data(),
                           r.theta_hat.data() + r.theta_hat.size())},
      {"objective", r.objective},
      {"converged", r.converged},
      {"iters", r.iters},
      {"grad_norm", r.grad_norm}};
  emit(doc.dump(2), out_path);
  return r.converged ? 0 : 1;
}

int run_simulate(const std::string& config_path, double eps_override,
                 std::uint64_t seed, const std::string& out_path) {
  const gammareg::ExperimentConfig config =
      load_experiment_config(config_path);
  const double eps =
      eps_override >= 0.0
          ? eps_override
          : (config.epsilons.empty() ? 0.0 : config.epsilons.front());
  gammareg::ContaminationScheme scheme;
  scheme.clean_theta = config.beta_true;
  scheme.mode = gammareg::ContaminationMode::Heterogeneous;
  scheme.outlier_ratio = eps;
  scheme.outlier_mean = config.outlier_mean;
  scheme.outlier_sd = config.outlier_sd;
  scheme.outlier_response = config.outlier_response;
  gammareg::CovariateSpec cov;
  cov.p = config.p;
  cov.rho = config.rho;
  const gammareg::GeneratedData data = gammareg::generate(
      gammareg::logistic_model(), scheme, cov, config.n, seed);
  const std::string csv =
      gammareg::dataset_to_csv(data.dataset, data.is_outlier);
  emit(csv, out_path);
  return 0;
}

gammareg::PopulationScenario scenario_from_config(const json& cfg) {
  const std::string name = cfg.value("scenario", "theorem-sweep");
  if (name == "theorem-sweep") {
    return gammareg::theorem_sweep_scenario(cfg.value("cut", 4.0),
                                            cfg.value("rate", 0.3));
  }
  if (name == "adversarial") return gammareg::adversarial_scenario();
  if (name == "heterogeneous-bias") {
    return gammareg::heterogeneous_bias_scenario();
  }
  if (name == "homogeneous-bias") return gammareg::homogeneous_bias_scenario();
  if (name == "gaussian-leverage") {
    return gammareg::gaussian_leverage_scenario();
  }
  throw gammareg::ConfigError("unknown scenario '" + name + "'");
}

int run_theory(const std::string& check, const std::string& config_path,
               const std::string& out_path) {
  json cfg = json::object();
  if (!config_path.empty()) {
    try {
      cfg = json::parse(slurp(config_path));
    } catch (const json::exception& e) {
      throw gammareg::ConfigError(std::string("config is not valid JSON: ") +
                                  e.what());
    }
  }
  const gammareg::GammaParam gamma(cfg.value("gamma", 1.0));
  Eigen::VectorXd theta(2);
  theta << 0.2, 0.8;
  if (cfg.contains("theta")) {
    const auto v = cfg["theta"].get<std::vector<double>>();
    theta = Eigen::Map<const Eigen::VectorXd>(
        v.data(), static_cast<Eigen::Index>(v.size()));
  }

  if (check == "theorem1") {
    const auto scenario = scenario_from_config(cfg);
    const auto report =
        gammareg::check_theorem1(scenario, theta, gamma);
    emit(gammareg::to_json(report, scenario, theta, gamma), out_path);
    return 0;
  }
  if (check == "pythagorean") {
    const auto scenario = scenario_from_config(cfg);
    const auto report = gammareg::check_pythagorean(scenario, theta, gamma);
    emit(gammareg::to_json(report, scenario, theta, gamma), out_path);
    return 0;
  }
  if (check == "type2-bias") {
    json cfg2 = cfg;
    if (!cfg2.contains("scenario")) cfg2["scenario"] = "heterogeneous-bias";
    const auto scenario = scenario_from_config(cfg2);
    gammareg::BiasGrid grid;
    if (cfg2.contains("grid")) {
      grid.half_width = cfg2["grid"].value("half_width", grid.half_width);
      grid.step = cfg2["grid"].value("step", grid.step);
    }
    const auto report = gammareg::check_type2_bias(scenario, gamma, grid);
    emit(gammareg::to_json(report, scenario, gamma), out_path);
    return 0;
  }
  if (check == "sweep") {
    std::vector<double> cuts{2.0, 3.0, 4.0, 5.0, 6.0};
    if (cfg.contains("cuts")) cuts = cfg["cuts"].get<std::vector<double>>();
    const auto sweep = gammareg::run_theorem_sweep(cuts, theta, gamma);
    emit(gammareg::to_json(sweep, theta, gamma), out_path);
    return 0;
  }
  throw gammareg::ConfigError(
      "unknown check '" + check +
      "' (expected theorem1, pythagorean, type2-bias, or sweep)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"γ-divergence robust regression toolkit"};
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Run the Monte Carlo MSE sweep and write reports");
  std::string bench_config, bench_prefix = "bench_report",
              bench_format = "all";
  int bench_threads = 0;
  bool bench_strict = false;
  bench->add_option("--config", bench_config,
                    "Experiment config JSON (defaults to the reference "
                    "logistic experiment)");
  bench->add_option("--out-prefix", bench_prefix,
                    "Report path prefix (suffixes .csv/.json/.md)");
  bench->add_option("--format", bench_format, "csv, json, markdown, or all")
      ->check(CLI::IsMember({"csv", "json", "markdown", "all"}));
  bench->add_option("--threads", bench_threads,
                    "Worker threads (overrides the config; 1 = bit-exact "
                    "reference mode)");
  bench->add_flag("--strict", bench_strict,
                  "Exit with code 2 if any fit fails or does not converge");

  // fit
  auto* fit_cmd = app.add_subcommand(
      "fit", "Fit one model to a CSV dataset by γ-cross-entropy "
             "minimization");
  std::string fit_data, fit_model = "logistic", fit_init = "mle", fit_out;
  double fit_gamma = 0.5;
  int fit_type = 1;
  fit_cmd->add_option("--data", fit_data, "Dataset CSV (x1..xp,y,is_outlier)")
      ->required();
  fit_cmd->add_option("--model", fit_model, "logistic, gaussian, or poisson")
      ->check(CLI::IsMember({"logistic", "gaussian", "poisson"}));
  fit_cmd->add_option("--gamma", fit_gamma, "Tuning parameter γ > 0");
  fit_cmd->add_option("--type", fit_type, "Cross-entropy type (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  fit_cmd->add_option("--init", fit_init, "mle, zero, or trimmed-mle")
      ->check(CLI::IsMember({"mle", "zero", "trimmed-mle"}));
  fit_cmd->add_option("--out", fit_out, "Result JSON path (stdout if unset)");

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "Generate one contaminated dataset as CSV");
  std::string sim_config, sim_out;
  double sim_eps = -1.0;
  std::uint64_t sim_seed = 1;
  sim->add_option("--config", sim_config, "Experiment config JSON");
  sim->add_option("--eps", sim_eps,
                  "Outlier ratio (defaults to the config's first value)");
  sim->add_option("--seed", sim_seed, "Generator seed");
  sim->add_option("--out", sim_out, "Output CSV path (stdout if unset)");

  // theory
  auto* theory = app.add_subcommand(
      "theory", "Quadrature verification of the robustness claims");
  std::string theory_check = "sweep", theory_config, theory_out;
  theory->add_option("--check", theory_check,
                     "theorem1, pythagorean, type2-bias, or sweep")
      ->check(CLI::IsMember({"theorem1", "pythagorean", "type2-bias",
                             "sweep"}));
  theory->add_option("--config", theory_config,
                     "Check config JSON (scenario, gamma, theta, cuts, grid)");
  theory->add_option("--out", theory_out,
                     "Report JSON path (stdout if unset)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      return run_bench(bench_config, bench_prefix, bench_format,
                       bench_threads, bench_strict);
    }
    if (fit_cmd->parsed()) {
      return run_fit(fit_data, fit_model, fit_gamma, fit_type, fit_init,
                     fit_out);
    }
    if (sim->parsed()) {
      return run_simulate(sim_config, sim_eps, sim_seed, sim_out);
    }
    if (theory->parsed()) {
      return run_theory(theory_check, theory_config, theory_out);
    }
  } catch (const gammareg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

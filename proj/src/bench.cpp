#include "gammareg/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gammareg/errors.hpp"
#include "gammareg/models/logistic.hpp"
#include "gammareg/numerics.hpp"
#include "gammareg/rng.hpp"

namespace gammareg {

namespace {

using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string init_to_string(InitStrategy init) {
  switch (init) {
    case InitStrategy::MLEInit:
      return "mle";
    case InitStrategy::ZeroInit:
      return "zero";
    case InitStrategy::TrimmedMLEInit:
      return "trimmed-mle";
    case InitStrategy::Custom:
      break;
  }
  throw ConfigError("custom initialization cannot be serialized");
}

InitStrategy init_from_string(const std::string& s) {
  if (s == "mle") return InitStrategy::MLEInit;
  if (s == "zero") return InitStrategy::ZeroInit;
  if (s == "trimmed-mle") return InitStrategy::TrimmedMLEInit;
  throw ConfigError("unknown init strategy '" + s +
                    "' (expected mle, zero, or trimmed-mle)");
}

EntropyKind kind_from_string(const std::string& s) {
  if (s == "type1") return EntropyKind::Type1;
  if (s == "type2") return EntropyKind::Type2;
  throw ConfigError("unknown entropy kind '" + s +
                    "' (expected type1 or type2)");
}

void validate(const ExperimentConfig& c) {
  if (c.n < 1) throw ConfigError("n must be >= 1");
  if (c.p < 1) throw ConfigError("p must be >= 1");
  if (c.beta_true.size() != c.p + 1) {
    throw ConfigError("beta_true must have p+1 entries");
  }
  if (c.outlier_mean.size() != c.p) {
    throw ConfigError("outlier mean must have p entries");
  }
  if (c.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (c.epsilons.empty() || c.gammas.empty() || c.kinds.empty()) {
    throw ConfigError("epsilons, gammas, and kinds must be non-empty");
  }
  for (double e : c.epsilons) {
    if (!(e >= 0.0 && e < 1.0)) {
      throw ConfigError("every epsilon must lie in [0, 1)");
    }
  }
  for (double g : c.gammas) {
    (void)GammaParam(g);  // validates positivity
  }
}

ContaminationScheme scheme_for(const ExperimentConfig& c, double eps) {
  ContaminationScheme scheme;
  scheme.clean_theta = c.beta_true;
  scheme.mode = ContaminationMode::Heterogeneous;
  scheme.outlier_ratio = eps;
  scheme.outlier_mean = c.outlier_mean;
  scheme.outlier_sd = c.outlier_sd;
  scheme.outlier_response = c.outlier_response;
  return scheme;
}

/// Mean and sample SD over the non-NaN entries, reduced in index order.
void mean_and_sd(const std::vector<double>& values, double* mean,
                 double* sd) {
  std::vector<double> valid;
  valid.reserve(values.size());
  for (double v : values) {
    if (!std::isnan(v)) valid.push_back(v);
  }
  if (valid.empty()) {
    *mean = kNan;
    *sd = kNan;
    return;
  }
  const double m =
      pairwise_sum(valid.data(), valid.size()) /
      static_cast<double>(valid.size());
  *mean = m;
  if (valid.size() < 2) {
    *sd = 0.0;
    return;
  }
  std::vector<double> sq(valid.size());
  for (std::size_t i = 0; i < valid.size(); ++i) {
    sq[i] = (valid[i] - m) * (valid[i] - m);
  }
  *sd = std::sqrt(pairwise_sum(sq.data(), sq.size()) /
                  static_cast<double>(valid.size() - 1));
}

}  // namespace

ExperimentConfig::ExperimentConfig()
    : n(1000),
      p(5),
      beta_true(6),
      rho(0.2),
      epsilons{0.1, 0.2, 0.3, 0.4},
      gammas{0.5, 1.0},
      kinds{EntropyKind::Type1, EntropyKind::Type2},
      replicates(100),
      master_seed(20240601),
      threads(1),
      init(InitStrategy::TrimmedMLEInit),
      max_iters(500),
      outlier_mean(5),
      outlier_sd(0.5),
      outlier_response(0.0) {
  beta_true << 0.0, 1.0, -1.0, 1.0, -1.0, 0.0;
  outlier_mean << 20.0, 0.0, 20.0, 0.0, 0.0;
}

const MseCell& MseReport::cell(double eps, double gamma,
                               EntropyKind kind) const {
  for (const MseCell& c : cells) {
    if (c.eps == eps && c.gamma == gamma && c.kind == kind) return c;
  }
  throw ConfigError("no such report cell");
}

double compute_mse(const Eigen::VectorXd& theta_hat,
                   const Eigen::VectorXd& theta_true) {
  if (theta_hat.size() != theta_true.size()) {
    throw LengthMismatch("parameter vectors differ in length");
  }
  return (theta_hat - theta_true).squaredNorm() /
         static_cast<double>(theta_hat.size());
}

MseReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::size_t ne = config.epsilons.size();
  const std::size_t ng = config.gammas.size();
  const std::size_t nk = config.kinds.size();
  const std::size_t reps = static_cast<std::size_t>(config.replicates);

  MseReport report;
  report.config = config;
  report.cells.resize(ne * ng * nk);
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t g = 0; g < ng; ++g) {
      for (std::size_t k = 0; k < nk; ++k) {
        MseCell& cell = report.cells[(e * ng + g) * nk + k];
        cell.eps = config.epsilons[e];
        cell.gamma = config.gammas[g];
        cell.kind = config.kinds[k];
        cell.replicate_mse.assign(reps, kNan);
        cell.theta_hats.assign(reps, Eigen::VectorXd());
      }
    }
  }
  // Failure counts are accumulated per (cell, replicate) slot first so the
  // totals do not depend on the order in which worker threads finish.
  std::vector<std::vector<int>> failed(ne * ng * nk,
                                       std::vector<int>(reps, 0));

  const LogisticModel model;
  CovariateSpec cov;
  cov.p = config.p;
  cov.rho = config.rho;

  // One task = one (ε, replicate) dataset plus all its (γ, kind) fits.
  const std::size_t tasks = ne * reps;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= tasks) break;
      const std::size_t e = task / reps;
      const std::size_t r = task % reps;
      const std::uint64_t seed = derive_seed(
          derive_seed(config.master_seed, static_cast<std::uint64_t>(e)),
          static_cast<std::uint64_t>(r));
      const GeneratedData data = generate(
          model, scheme_for(config, config.epsilons[e]), cov, config.n, seed);
      for (std::size_t g = 0; g < ng; ++g) {
        for (std::size_t k = 0; k < nk; ++k) {
          const std::size_t idx = (e * ng + g) * nk + k;
          MseCell& cell = report.cells[idx];
          FitConfig fc;
          fc.gamma = GammaParam(config.gammas[g]);
          fc.kind = config.kinds[k];
          fc.init = config.init;
          fc.max_iters = config.max_iters;
          try {
            const FitResult fr = fit(model, data.dataset, fc);
            cell.replicate_mse[r] = compute_mse(fr.theta_hat,
                                                config.beta_true);
            cell.theta_hats[r] = fr.theta_hat;
            if (!fr.converged) failed[idx][r] = 1;
          } catch (const Error&) {
            failed[idx][r] = 1;  // MSE slot stays NaN
          }
        }
      }
    }
  };
  if (config.threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(config.threads));
    for (int t = 0; t < config.threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t idx = 0; idx < report.cells.size(); ++idx) {
    MseCell& cell = report.cells[idx];
    mean_and_sd(cell.replicate_mse, &cell.mean_mse, &cell.sd_mse);
    cell.failures = 0;
    for (int f : failed[idx]) cell.failures += f;
  }
  return report;
}

std::string emit_report(const MseReport& report, ReportFormat format) {
  const ExperimentConfig& c = report.config;
  if (format == ReportFormat::Csv) {
    std::string out = "eps,gamma,kind,replicate,mse,converged";
    for (int j = 0; j <= c.p; ++j) {
      out += ",theta" + std::to_string(j);
    }
    out += '\n';
    for (const MseCell& cell : report.cells) {
      for (std::size_t r = 0; r < cell.replicate_mse.size(); ++r) {
        out += format_double(cell.eps);
        out += ',';
        out += format_double(cell.gamma);
        out += ',';
        out += to_string(cell.kind);
        out += ',';
        out += std::to_string(r);
        out += ',';
        const bool have = !std::isnan(cell.replicate_mse[r]);
        out += have ? format_double(cell.replicate_mse[r]) : "";
        out += ',';
        out += have ? "1" : "0";
        for (int j = 0; j <= c.p; ++j) {
          out += ',';
          if (have) out += format_double(cell.theta_hats[r](j));
        }
        out += '\n';
      }
    }
    return out;
  }
  if (format == ReportFormat::Json) {
    json cells = json::array();
    for (const MseCell& cell : report.cells) {
      json thetas = json::array();
      for (const auto& th : cell.theta_hats) {
        if (th.size() == 0) {
          thetas.push_back(nullptr);
        } else {
          thetas.push_back(std::vector<double>(th.data(),
                                               th.data() + th.size()));
        }
      }
      json mses = json::array();
      for (double v : cell.replicate_mse) {
        if (std::isnan(v)) {
          mses.push_back(nullptr);
        } else {
          mses.push_back(v);
        }
      }
      cells.push_back({{"eps", cell.eps},
                       {"gamma", cell.gamma},
                       {"kind", to_string(cell.kind)},
                       {"mean_mse", cell.mean_mse},
                       {"sd_mse", cell.sd_mse},
                       {"failures", cell.failures},
                       {"replicate_mse", mses},
                       {"theta_hat", thetas}});
    }
    const json doc{{"config", json::parse(experiment_config_to_json(c))},
                   {"cells", cells}};
    return doc.dump(2);
  }
  // Markdown: kind rows × γ columns, one block per ε.
  const auto short_double = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  std::string out;
  for (double eps : c.epsilons) {
    out += "### eps = " + short_double(eps) + "\n\n| method |";
    for (double g : c.gammas) {
      out += " gamma=" + short_double(g) + " |";
    }
    out += "\n|---|";
    for (std::size_t g = 0; g < c.gammas.size(); ++g) out += "---|";
    out += '\n';
    for (EntropyKind kind : c.kinds) {
      out += "| ";
      out += to_string(kind);
      out += " |";
      for (double g : c.gammas) {
        const MseCell& cell = report.cell(eps, g, kind);
        char buf[80];
        std::snprintf(buf, sizeof(buf), " %.5g (%.2g) |", cell.mean_mse,
                      cell.sd_mse);
        out += buf;
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  std::vector<std::string> kind_names;
  kind_names.reserve(config.kinds.size());
  for (EntropyKind k : config.kinds) kind_names.emplace_back(to_string(k));
  const json doc{
      {"n", config.n},
      {"p", config.p},
      {"beta_true",
       std::vector<double>(config.beta_true.data(),
                           config.beta_true.data() + config.beta_true.size())},
      {"rho", config.rho},
      {"epsilons", config.epsilons},
      {"gammas", config.gammas},
      {"kinds", kind_names},
      {"replicates", config.replicates},
      {"master_seed", config.master_seed},
      {"threads", config.threads},
      {"init", init_to_string(config.init)},
      {"max_iters", config.max_iters},
      {"outlier",
       {{"mean",
         std::vector<double>(
             config.outlier_mean.data(),
             config.outlier_mean.data() + config.outlier_mean.size())},
        {"sd", config.outlier_sd},
        {"response", config.outlier_response}}}};
  return doc.dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig c;  // absent keys keep the reference defaults
  try {
    if (doc.contains("n")) c.n = doc["n"].get<int>();
    if (doc.contains("p")) c.p = doc["p"].get<int>();
    if (doc.contains("beta_true")) {
      const auto v = doc["beta_true"].get<std::vector<double>>();
      c.beta_true = Eigen::Map<const Eigen::VectorXd>(
          v.data(), static_cast<Eigen::Index>(v.size()));
    } else if (c.p != 5) {
      throw ConfigError("beta_true is required when p != 5");
    }
    if (doc.contains("rho")) c.rho = doc["rho"].get<double>();
    if (doc.contains("epsilons")) {
      c.epsilons = doc["epsilons"].get<std::vector<double>>();
    }
    if (doc.contains("gammas")) {
      c.gammas = doc["gammas"].get<std::vector<double>>();
    }
    if (doc.contains("kinds")) {
      c.kinds.clear();
      for (const auto& k : doc["kinds"]) {
        c.kinds.push_back(kind_from_string(k.get<std::string>()));
      }
    }
    if (doc.contains("replicates")) {
      c.replicates = doc["replicates"].get<int>();
    }
    if (doc.contains("master_seed")) {
      c.master_seed = doc["master_seed"].get<std::uint64_t>();
    }
    if (doc.contains("threads")) c.threads = doc["threads"].get<int>();
    if (doc.contains("init")) {
      c.init = init_from_string(doc["init"].get<std::string>());
    }
    if (doc.contains("max_iters")) c.max_iters = doc["max_iters"].get<int>();
    if (doc.contains("outlier")) {
      const json& o = doc["outlier"];
      if (o.contains("mean")) {
        const auto v = o["mean"].get<std::vector<double>>();
        c.outlier_mean = Eigen::Map<const Eigen::VectorXd>(
            v.data(), static_cast<Eigen::Index>(v.size()));
      } else if (c.p != 5) {
        throw ConfigError("outlier.mean is required when p != 5");
      }
      if (o.contains("sd")) c.outlier_sd = o["sd"].get<double>();
      if (o.contains("response")) {
        c.outlier_response = o["response"].get<double>();
      }
    } else if (c.p != 5) {
      throw ConfigError("outlier.mean is required when p != 5");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") +
                      e.what());
  }
  return c;
}

}  // namespace gammareg

#include "gammareg/population.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "gammareg/errors.hpp"
#include "gammareg/numerics.hpp"

namespace gammareg {

namespace {

constexpr double kInvSqrtTwoPi = 0.3989422804014326779;
constexpr double kSupportSigmas = 8.5;

/// Everything the inner-integral evaluators need at a fixed covariate value.
struct EvalContext {
  const PopulationScenario& s;
  const ConditionalModel& f;     // the f in d(g, f)
  const Eigen::VectorXd& theta;  // f-side parameter
  const ConditionalModel& g;     // g-side family (the scenario's model)
  Eigen::VectorXd theta_g;       // g-side parameter
  bool contaminated;             // g includes the dirac outlier part
  double gam;
  const QuadratureSpec& spec;
};

void validate_theta(const ConditionalModel& model, const Eigen::VectorXd& theta,
                    const char* label) {
  if (theta.size() != static_cast<Eigen::Index>(model.param_count(1))) {
    throw ConfigError(std::string(label) + " parameter length " +
                      std::to_string(theta.size()) + " does not match " +
                      model.name() + " with one covariate");
  }
}

EvalContext make_context(const PopulationScenario& s,
                         const ConditionalModel& f_model,
                         const Eigen::VectorXd& theta, GammaParam gamma,
                         const PopulationSide& side,
                         const QuadratureSpec& spec) {
  if (s.model == nullptr) throw ConfigError("scenario has no model");
  validate_theta(*s.model, s.theta_star, "scenario");
  validate_theta(f_model, theta, "f-side");
  Eigen::VectorXd theta_g =
      (!side.contaminated && side.g_theta) ? *side.g_theta : s.theta_star;
  validate_theta(*s.model, theta_g, "g-side");
  return {s,       f_model, theta, *s.model,
          theta_g, side.contaminated, gamma.value, spec};
}

double base_weight(const PopulationScenario& s, const PopulationSide& side,
                   double x) {
  const double w = s.gx.pdf(x);
  return side.tilde_base ? (1.0 - s.eps_of(x)) * w : w;
}

/// Merged discrete response supports of both sides (plus the outlier point
/// when contamination is active).  Returns false for continuous responses.
bool merged_support(const EvalContext& c, const Eigen::VectorXd& xi,
                    std::vector<double>& ys) {
  std::vector<double> yg, yf;
  const bool dg = c.g.discrete_support(c.theta_g, xi, yg);
  const bool df = c.f.discrete_support(c.theta, xi, yf);
  if (dg != df) {
    throw ConfigError("g and f response measures differ "
                      "(one discrete, one continuous)");
  }
  if (!dg) return false;
  ys.clear();
  std::merge(yg.begin(), yg.end(), yf.begin(), yf.end(),
             std::back_inserter(ys));
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (c.contaminated && c.s.eps_rate > 0.0) {
    if (!c.g.in_support(c.s.y_dagger)) {
      throw ConfigError("outlier response lies outside the model support");
    }
    if (!std::binary_search(ys.begin(), ys.end(), c.s.y_dagger)) {
      ys.push_back(c.s.y_dagger);
      std::sort(ys.begin(), ys.end());
    }
  }
  return true;
}

Eigen::VectorXd reduce_rows(const Eigen::MatrixXd& rows) {
  Eigen::VectorXd out(rows.cols());
  std::vector<double> column(rows.rows());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) column[i] = rows(i, j);
    out(j) = pairwise_sum(column.data(), column.size());
  }
  return out;
}

/// a(x) = ∫ g(y|x) f(y|x;θ)^γ dy and (optionally) its θ-gradient.
double inner_numerator(const EvalContext& c, double x,
                       const Eigen::VectorXd& xi, Eigen::VectorXd* da) {
  const double gam = c.gam;
  const double eps = c.contaminated ? c.s.eps_of(x) : 0.0;
  const Eigen::Index dim = c.theta.size();
  double clean = 0.0;
  std::vector<double> ys;
  if (merged_support(c, xi, ys)) {
    std::vector<double> terms(ys.size());
    Eigen::MatrixXd grads;
    if (da != nullptr) grads.resize(static_cast<Eigen::Index>(ys.size()), dim);
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const double lg = c.g.log_density(c.theta_g, xi, ys[k]);
      const double lf = c.f.log_density(c.theta, xi, ys[k]);
      const double t = std::exp(lg + gam * lf);
      terms[k] = t;
      if (da != nullptr) {
        grads.row(static_cast<Eigen::Index>(k)) =
            t * gam *
            c.f.log_density_gradient(c.theta, xi, ys[k]).transpose();
      }
    }
    clean = pairwise_sum(terms.data(), terms.size());
    if (da != nullptr) *da = reduce_rows(grads);
  } else {
    // Continuous response: one covering interval spanning both windows; the
    // panel decomposition resolves the (possibly separated) density bumps.
    const Interval wg = c.g.response_window(c.theta_g, xi);
    const Interval wf = c.f.response_window(c.theta, xi);
    const Interval joint{std::min(wg.lo, wf.lo), std::max(wg.hi, wf.hi)};
    if (da != nullptr) {
      const Eigen::VectorXd out = integrate_vector(
          [&](double y, Eigen::VectorXd& v) {
            const double lg = c.g.log_density(c.theta_g, xi, y);
            const double lf = c.f.log_density(c.theta, xi, y);
            const double t = std::exp(lg + gam * lf);
            v(0) = t;
            v.tail(dim) = t * gam * c.f.log_density_gradient(c.theta, xi, y);
          },
          static_cast<int>(1 + dim), {joint}, c.spec);
      clean = out(0);
      *da = out.tail(dim);
    } else {
      clean = integrate(
          [&](double y) {
            return std::exp(c.g.log_density(c.theta_g, xi, y) +
                            gam * c.f.log_density(c.theta, xi, y));
          },
          {joint}, c.spec);
    }
  }
  double a = (1.0 - eps) * clean;
  if (da != nullptr) *da *= (1.0 - eps);
  if (eps > 0.0) {
    if (!c.f.in_support(c.s.y_dagger)) {
      throw ConfigError("outlier response lies outside the model support");
    }
    const double t =
        std::exp(gam * c.f.log_density(c.theta, xi, c.s.y_dagger));
    a += eps * t;
    if (da != nullptr) {
      *da += eps * t * gam *
             c.f.log_density_gradient(c.theta, xi, c.s.y_dagger);
    }
  }
  return a;
}

/// S(x) = ∫ g(y|x)^{1+γ} dy for the scenario's (possibly contaminated)
/// conditional density.
double inner_self(const EvalContext& c, double x, const Eigen::VectorXd& xi) {
  const double gam = c.gam;
  const double eps = c.contaminated ? c.s.eps_of(x) : 0.0;
  std::vector<double> ys;
  const bool discrete = c.g.discrete_support(c.theta_g, xi, ys);
  if (!discrete) {
    if (eps > 0.0) {
      throw QuadratureFailure(
          "self entropy diverges: point-mass contamination of a "
          "continuous response");
    }
    const Interval w = c.g.response_window(c.theta_g, xi);
    return integrate(
        [&](double y) {
          return std::exp((1.0 + gam) *
                          c.g.log_density(c.theta_g, xi, y));
        },
        {w}, c.spec);
  }
  if (eps > 0.0) {
    if (!c.g.in_support(c.s.y_dagger)) {
      throw ConfigError("outlier response lies outside the model support");
    }
    if (!std::binary_search(ys.begin(), ys.end(), c.s.y_dagger)) {
      ys.push_back(c.s.y_dagger);
      std::sort(ys.begin(), ys.end());
    }
  }
  std::vector<double> terms(ys.size());
  for (std::size_t k = 0; k < ys.size(); ++k) {
    double pmf = (1.0 - eps) * std::exp(c.g.log_density(c.theta_g, xi, ys[k]));
    if (eps > 0.0 && ys[k] == c.s.y_dagger) pmf += eps;
    terms[k] = pmf > 0.0 ? std::pow(pmf, 1.0 + gam) : 0.0;
  }
  return pairwise_sum(terms.data(), terms.size());
}

}  // namespace

CovariateMixture::CovariateMixture(std::vector<CovariateComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw ConfigError("covariate mixture needs at least one component");
  }
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !std::isfinite(c.mu) || !(c.sd > 0.0) ||
        !std::isfinite(c.sd)) {
      throw ConfigError("covariate mixture component is invalid");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("covariate mixture weights must sum to 1");
  }
}

CovariateMixture CovariateMixture::standard_normal() {
  return CovariateMixture({{1.0, 0.0, 1.0}});
}

double CovariateMixture::pdf(double x) const {
  double v = 0.0;
  for (const auto& c : components_) {
    const double z = (x - c.mu) / c.sd;
    v += c.weight * kInvSqrtTwoPi / c.sd * std::exp(-0.5 * z * z);
  }
  return v;
}

std::vector<Interval> CovariateMixture::support() const {
  std::vector<Interval> raw;
  raw.reserve(components_.size());
  for (const auto& c : components_) {
    raw.push_back({c.mu - kSupportSigmas * c.sd, c.mu + kSupportSigmas * c.sd});
  }
  std::sort(raw.begin(), raw.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : raw) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

double PopulationScenario::eps_of(double x) const {
  if (eps_rate == 0.0) return 0.0;
  return (homogeneous() || x > cut) ? eps_rate : 0.0;
}

bool PopulationScenario::homogeneous() const {
  return cut == -std::numeric_limits<double>::infinity();
}

std::vector<Interval> PopulationScenario::x_domain() const {
  std::vector<Interval> out;
  for (const Interval& iv : gx.support()) {
    if (!homogeneous() && iv.lo < cut && cut < iv.hi) {
      out.push_back({iv.lo, cut});
      out.push_back({cut, iv.hi});
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

CrossEntropyValue population_cross_entropy(const PopulationScenario& scenario,
                                           const ConditionalModel& f_model,
                                           const Eigen::VectorXd& theta,
                                           GammaParam gamma, EntropyKind kind,
                                           const PopulationSide& side,
                                           const QuadratureSpec& spec) {
  const EvalContext c =
      make_context(scenario, f_model, theta, gamma, side, spec);
  const auto domain = scenario.x_domain();
  const double gam = gamma.value;
  if (kind == EntropyKind::Type1) {
    const double shrink = gam / (1.0 + gam);
    const double t = integrate(
        [&](double x) {
          Eigen::VectorXd xi(1);
          xi << x;
          const double a = inner_numerator(c, x, xi, nullptr);
          const double log_i = f_model.log_power_integral(theta, xi, gamma);
          return a * std::exp(-shrink * log_i) *
                 base_weight(scenario, side, x);
        },
        domain, spec);
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw QuadratureFailure(
          "type-1 outer integral underflowed to zero or is non-finite");
    }
    return {-std::log(t) / gam, kind, false};
  }
  const Eigen::VectorXd nm = integrate_vector(
      [&](double x, Eigen::VectorXd& v) {
        Eigen::VectorXd xi(1);
        xi << x;
        const double w = base_weight(scenario, side, x);
        v(0) = inner_numerator(c, x, xi, nullptr) * w;
        v(1) = std::exp(f_model.log_power_integral(theta, xi, gamma)) * w;
      },
      2, domain, spec);
  if (!(nm(0) > 0.0) || !(nm(1) > 0.0) || !nm.allFinite()) {
    throw QuadratureFailure(
        "type-2 outer integrals underflowed to zero or are non-finite");
  }
  return {-std::log(nm(0)) / gam + std::log(nm(1)) / (1.0 + gam), kind,
          false};
}

CrossEntropyValue population_self_entropy(const PopulationScenario& scenario,
                                          GammaParam gamma, EntropyKind kind,
                                          const PopulationSide& side,
                                          const QuadratureSpec& spec) {
  if (scenario.model == nullptr) throw ConfigError("scenario has no model");
  if (!side.contaminated) {
    const Eigen::VectorXd theta_g =
        side.g_theta ? *side.g_theta : scenario.theta_star;
    return population_cross_entropy(scenario, *scenario.model, theta_g, gamma,
                                    kind, side, spec);
  }
  const EvalContext c = make_context(scenario, *scenario.model,
                                     scenario.theta_star, gamma, side, spec);
  const auto domain = scenario.x_domain();
  const double gam = gamma.value;
  if (kind == EntropyKind::Type1) {
    // d₁(g,g;w) = −(1/γ) log ∫ S(x)^{1/(1+γ)} w(x) dx.
    const double t = integrate(
        [&](double x) {
          Eigen::VectorXd xi(1);
          xi << x;
          return std::pow(inner_self(c, x, xi), 1.0 / (1.0 + gam)) *
                 base_weight(scenario, side, x);
        },
        domain, spec);
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw QuadratureFailure(
          "type-1 self integral underflowed to zero or is non-finite");
    }
    return {-std::log(t) / gam, kind, false};
  }
  // d₂(g,g;w): both terms share ∫ S(x) w(x) dx, so
  // d₂ = −(1/(γ(1+γ))) log ∫ S(x) w(x) dx.
  const double u = integrate(
      [&](double x) {
        Eigen::VectorXd xi(1);
        xi << x;
        return inner_self(c, x, xi) * base_weight(scenario, side, x);
      },
      domain, spec);
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw QuadratureFailure(
        "type-2 self integral underflowed to zero or is non-finite");
  }
  return {-std::log(u) / (gam * (1.0 + gam)), kind, false};
}

double gamma_divergence(const PopulationScenario& scenario,
                        const ConditionalModel& f_model,
                        const Eigen::VectorXd& theta, GammaParam gamma,
                        EntropyKind kind, const PopulationSide& side,
                        const QuadratureSpec& spec) {
  const CrossEntropyValue self =
      population_self_entropy(scenario, gamma, kind, side, spec);
  const CrossEntropyValue cross = population_cross_entropy(
      scenario, f_model, theta, gamma, kind, side, spec);
  return -self.value + cross.value;
}

ObjectiveEval population_type1_transformed_with_gradient(
    const PopulationScenario& scenario, const ConditionalModel& f_model,
    const Eigen::VectorXd& theta, GammaParam gamma,
    const PopulationSide& side, const QuadratureSpec& spec) {
  const EvalContext c =
      make_context(scenario, f_model, theta, gamma, side, spec);
  const auto domain = scenario.x_domain();
  const double gam = gamma.value;
  const double shrink = gam / (1.0 + gam);
  const Eigen::Index dim = theta.size();
  const Eigen::VectorXd out = integrate_vector(
      [&](double x, Eigen::VectorXd& v) {
        Eigen::VectorXd xi(1);
        xi << x;
        Eigen::VectorXd da(dim);
        const double a = inner_numerator(c, x, xi, &da);
        const double log_i = f_model.log_power_integral(theta, xi, gamma);
        const Eigen::VectorXd dlog_i =
            f_model.log_power_integral_gradient(theta, xi, gamma);
        const double scale =
            std::exp(-shrink * log_i) * base_weight(scenario, side, x);
        v(0) = a * scale;
        v.tail(dim) = (da - shrink * a * dlog_i) * scale;
      },
      static_cast<int>(1 + dim), domain, spec);
  ObjectiveEval r;
  r.value = -out(0);
  r.gradient = -out.tail(dim);
  return r;
}

double population_nu(const PopulationScenario& scenario,
                     const ConditionalModel& f_model,
                     const Eigen::VectorXd& theta, GammaParam gamma,
                     const QuadratureSpec& spec) {
  if (scenario.model == nullptr) throw ConfigError("scenario has no model");
  validate_theta(f_model, theta, "f-side");
  if (scenario.eps_rate == 0.0) return 0.0;
  if (!f_model.in_support(scenario.y_dagger)) {
    throw ConfigError("outlier response lies outside the model support");
  }
  std::vector<Interval> region;
  for (const Interval& iv : scenario.x_domain()) {
    if (scenario.homogeneous() || iv.lo >= scenario.cut) region.push_back(iv);
  }
  if (region.empty()) return 0.0;
  const double t = integrate(
      [&](double x) {
        Eigen::VectorXd xi(1);
        xi << x;
        return std::exp(gamma.value *
                        f_model.log_density(theta, xi, scenario.y_dagger)) *
               scenario.gx.pdf(x);
      },
      region, spec);
  return t > 0.0 ? std::pow(t, 1.0 / gamma.value) : 0.0;
}

}  // namespace gammareg

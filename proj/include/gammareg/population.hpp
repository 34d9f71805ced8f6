#pragma once

// Population-level (quadrature) γ-cross entropies and divergences for
// one-covariate scenarios: a clean conditional family f(·|·;θ*), optionally
// mixed with a point-mass outlier response, integrated against an explicit
// covariate density.  Discrete-response inner integrals are exact sums;
// continuous-response inner integrals and all outer integrals use
// Gauss–Legendre panels.

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <vector>

#include "gammareg/divergence.hpp"
#include "gammareg/model.hpp"
#include "gammareg/quadrature.hpp"
#include "gammareg/types.hpp"

namespace gammareg {

/// One component of a univariate normal-mixture covariate density.
struct CovariateComponent {
  double weight;
  double mu;
  double sd;
};

/// Univariate normal-mixture covariate density g(x).  Weights must be
/// positive and sum to 1 (checked to 1e-12 at construction); sds positive.
class CovariateMixture {
 public:
  explicit CovariateMixture(std::vector<CovariateComponent> components);
  static CovariateMixture standard_normal();

  double pdf(double x) const;

  /// Intervals covering all but ~1e-16 of the mass: each component's
  /// mu ± 8.5·sd, with overlapping intervals merged.
  std::vector<Interval> support() const;

  const std::vector<CovariateComponent>& components() const {
    return components_;
  }

 private:
  std::vector<CovariateComponent> components_;
};

/// A one-covariate population contamination scenario:
///   g(y|x) = (1 − ε(x)) f(y|x;θ*) + ε(x) δ_{y†}(y),   x ~ gx,
/// with ε(x) = eps_rate·1{x > cut}.  cut = −inf makes the rate constant in x
/// (homogeneous contamination); eps_rate = 0 disables contamination.
struct PopulationScenario {
  const ConditionalModel* model = nullptr;
  Eigen::VectorXd theta_star;
  CovariateMixture gx = CovariateMixture::standard_normal();
  double eps_rate = 0.0;
  double cut = -std::numeric_limits<double>::infinity();
  double y_dagger = 0.0;

  double eps_of(double x) const;
  bool homogeneous() const;  // ε(x) does not vary with x

  /// gx support split at the contamination boundary so quadrature panels
  /// never straddle the ε(x) discontinuity.
  std::vector<Interval> x_domain() const;
};

/// Selects which conditional density plays the role of "g" in d(g,f) and
/// which covariate measure weights the outer integral.
struct PopulationSide {
  /// true: g is the scenario's contaminated mixture.
  /// false: g = f(·|·;g_theta), a pure model density (θ* when unset).
  bool contaminated = true;
  std::optional<Eigen::VectorXd> g_theta;
  /// true: weight the outer integral by g̃(x) = (1 − ε(x))·gx(x)
  /// instead of gx(x).
  bool tilde_base = false;
};

/// d_{γ,kind}(g, f_θ; w): outer quadrature over x, inner exact sum
/// (discrete response) or quadrature (continuous response) over y.
/// Throws QuadratureFailure if an outer integral underflows to zero and
/// ConfigError if g and f do not share a response measure type.
CrossEntropyValue population_cross_entropy(const PopulationScenario& scenario,
                                           const ConditionalModel& f_model,
                                           const Eigen::VectorXd& theta,
                                           GammaParam gamma, EntropyKind kind,
                                           const PopulationSide& side = {},
                                           const QuadratureSpec& spec = {});

/// d_{γ,kind}(g, g; w): self cross entropy of the scenario's conditional
/// density.  Throws QuadratureFailure for a continuous-response model with
/// contamination present (the point mass makes ∫g^{1+γ}dy diverge).
CrossEntropyValue population_self_entropy(const PopulationScenario& scenario,
                                          GammaParam gamma, EntropyKind kind,
                                          const PopulationSide& side = {},
                                          const QuadratureSpec& spec = {});

/// D_{γ,kind}(g, f_θ; w) = −d_{γ,kind}(g,g;w) + d_{γ,kind}(g,f_θ;w).
double gamma_divergence(const PopulationScenario& scenario,
                        const ConditionalModel& f_model,
                        const Eigen::VectorXd& theta, GammaParam gamma,
                        EntropyKind kind, const PopulationSide& side = {},
                        const QuadratureSpec& spec = {});

/// Value and θ-gradient of the transformed type-1 entropy
///   d̃₁(g, f_θ; w) = −∫ [∫ g f_θ^γ dy]·[∫ f_θ^{1+γ} dy]^{−γ/(1+γ)} w(x) dx,
/// used to locate population argmins (same minimizer as d₁).
ObjectiveEval population_type1_transformed_with_gradient(
    const PopulationScenario& scenario, const ConditionalModel& f_model,
    const Eigen::VectorXd& theta, GammaParam gamma,
    const PopulationSide& side = {}, const QuadratureSpec& spec = {});

/// Aggregate tail-overlap diagnostic for the scenario's dirac outlier:
///   ν = { ∫_{ε(x)>0} f(y†|x;θ)^γ gx(x) dx }^{1/γ},
/// and 0 by convention when ε ≡ 0 (no contamination mass anywhere).
double population_nu(const PopulationScenario& scenario,
                     const ConditionalModel& f_model,
                     const Eigen::VectorXd& theta, GammaParam gamma,
                     const QuadratureSpec& spec = {});

}  // namespace gammareg

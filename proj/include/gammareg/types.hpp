#pragma once

#include <Eigen/Dense>

#include "gammareg/errors.hpp"

namespace gammareg {

/// Which of the two γ-cross-entropy constructions is meant.  They differ in
/// where the base measure on the explanatory variable enters: inside a
/// single log (Type1) versus once per term (Type2).
enum class EntropyKind { Type1, Type2 };

inline const char* to_string(EntropyKind k) {
  return k == EntropyKind::Type1 ? "type1" : "type2";
}

/// The positive tuning parameter γ trading efficiency against robustness.
/// Construction validates γ > 0 (strictly) and finite.
struct GammaParam {
  double value;

  explicit GammaParam(double g) : value(g) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw ConfigError("gamma must be a finite positive real, got " +
                        std::to_string(g));
    }
  }
};

/// Paired observations (x_1,y_1),...,(x_n,y_n): an n×p covariate matrix and
/// a length-n response vector.  Construction validates shape agreement,
/// n ≥ 1, and that every entry is finite.  p = 0 (intercept-only designs)
/// is allowed.
struct RegressionDataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;

  RegressionDataset(Eigen::MatrixXd x_in, Eigen::VectorXd y_in)
      : x(std::move(x_in)), y(std::move(y_in)) {
    if (y.size() < 1) {
      throw ConfigError("dataset needs at least one observation");
    }
    if (x.rows() != y.size()) {
      throw ConfigError("covariate rows (" + std::to_string(x.rows()) +
                        ") do not match response length (" +
                        std::to_string(y.size()) + ")");
    }
    if (!x.allFinite() || !y.allFinite()) {
      throw ConfigError("dataset contains non-finite entries");
    }
  }

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return x.cols(); }
};

/// A γ-cross-entropy value, tagged with its construction and whether the
/// monotone transform d̃ = -exp(-γ d) (negative-exponential scale) is
/// reported instead of d itself.
struct CrossEntropyValue {
  double value = 0.0;
  EntropyKind kind = EntropyKind::Type1;
  bool transformed = false;
};

}  // namespace gammareg

#pragma once

#include <cstddef>
#include <vector>

namespace metareason {

struct OlsFit {
  std::vector<double> coefficients;
  double r_squared = 0.0;  // centred: 1 - SSE / sum (y - mean y)^2
  std::size_t rows = 0;
};

/// Ordinary least squares without intercept. `design` holds one row per
/// observation. Throws DegenerateDesignError for rank-deficient designs.
OlsFit ols(const std::vector<std::vector<double>>& design, const std::vector<double>& target);

/// One reachable stopping belief with its features and exact VOC of sampling.
struct VocSample {
  int alpha = 1;
  int beta = 1;
  int remaining = 0;
  double vpi = 0.0;
  double voi1 = 0.0;
  double voc = 0.0;
};

struct VocRegression {
  double cost = 0.0;
  double vpi_coef = 0.0;
  double voi1_coef = 0.0;
  double cost_coef = 0.0;
  double r_squared = 0.0;
  std::vector<VocSample> samples;
};

/// Regress the exact VOC of sampling onto (VPI, VOI1, cost) over every belief
/// of the stopping problem that is reachable and still allows a computation.
/// Utilities are on the probability-of-correct-prediction scale.
VocRegression fit_voc_regression(double cost, int horizon = 30);

}  // namespace metareason

#pragma once

#include <span>
#include <vector>

namespace metareason {

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const noexcept { return alpha / (alpha + beta); }
  friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double x, double a, double b);

/// E[max(X, m)] for X ~ Beta(a, b) and a constant m.
///   = m * I_m(a, b) + mean * (1 - I_m(a + 1, b))
double expected_max_with_constant(const BetaParams& arm, double m);

/// E[max(theta, 1 - theta)] for theta ~ Beta(a, b).
double expected_max_symmetric(const BetaParams& arm);

/// E[theta * 1{theta < t}] for theta ~ Beta(a, b).
double truncated_mean_below(const BetaParams& arm, double t);

/// Composite Simpson rule over equally spaced samples (odd count >= 3).
double simpson(std::span<const double> samples, double step);

/// E[max_i theta_i] for independent Beta arms via
///   integral_0^1 (1 - prod_i I_x(a_i, b_i)) dx
/// on a fixed grid of `points` nodes (odd). Per-arm CDF grids are memoized
/// process-wide.
double expected_max_of_betas(std::span<const BetaParams> arms, int points = 513);

/// CDF of Beta(a, b) on the uniform grid x_j = j / (points - 1).
const std::vector<double>& beta_cdf_grid(const BetaParams& arm, int points);

}  // namespace metareason

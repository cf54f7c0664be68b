#pragma once

#include <memory>
#include <vector>

namespace metareason {

struct GpHyperparameters {
  double length_scale = 0.3;
  double signal_variance = 1.0;  // in standardised target units
};

struct GpPrediction {
  double mean = 0.0;
  double sd = 0.0;
};

/// Gaussian-process regression with an isotropic squared-exponential kernel
/// and per-observation noise. Targets are standardised internally.
class GaussianProcess {
 public:
  GaussianProcess();
  ~GaussianProcess();
  GaussianProcess(GaussianProcess&&) noexcept;
  GaussianProcess& operator=(GaussianProcess&&) noexcept;

  /// noise_variance holds per-point observation variances in target units.
  /// When refit_hyperparameters is false the previous hyperparameters are kept.
  void fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
           const std::vector<double>& noise_variance, bool refit_hyperparameters = true);

  GpPrediction predict(const std::vector<double>& x) const;
  std::vector<GpPrediction> predict(const std::vector<std::vector<double>>& x) const;

  const GpHyperparameters& hyperparameters() const noexcept { return hyper_; }
  /// Log marginal likelihood of the standardised data under `hyper`.
  double log_marginal_likelihood(const GpHyperparameters& hyper) const;
  std::size_t size() const noexcept { return x_.size(); }

 private:
  struct Factor;

  void factorize();

  std::vector<std::vector<double>> x_;
  std::vector<double> y_std_;
  std::vector<double> noise_std_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  GpHyperparameters hyper_;
  std::unique_ptr<Factor> factor_;
};

/// Expected improvement of a Gaussian prediction over `incumbent` (maximisation).
double expected_improvement(const GpPrediction& p, double incumbent);

}  // namespace metareason

#include "metareason/gaussian_process.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "metareason/error.hpp"

namespace metareason {

namespace {

constexpr double kJitter = 1e-8;
constexpr double kLengthScales[] = {0.05, 0.1, 0.15, 0.2, 0.3, 0.45, 0.7, 1.0, 1.5};
constexpr double kSignalVariances[] = {0.25, 0.5, 1.0, 2.0, 4.0};

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

double kernel(const std::vector<double>& a, const std::vector<double>& b, const GpHyperparameters& h) {
  return h.signal_variance * std::exp(-0.5 * sq_dist(a, b) / (h.length_scale * h.length_scale));
}

Eigen::MatrixXd gram(const std::vector<std::vector<double>>& x, const std::vector<double>& noise,
                     const GpHyperparameters& h) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      k(i, j) = k(j, i) = kernel(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)], h);
    }
    k(i, i) += noise[static_cast<std::size_t>(i)] + kJitter;
  }
  return k;
}

}  // namespace

struct GaussianProcess::Factor {
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;
};

GaussianProcess::GaussianProcess() = default;
GaussianProcess::~GaussianProcess() = default;
GaussianProcess::GaussianProcess(GaussianProcess&&) noexcept = default;
GaussianProcess& GaussianProcess::operator=(GaussianProcess&&) noexcept = default;

void GaussianProcess::fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                          const std::vector<double>& noise_variance, bool refit_hyperparameters) {
  if (x.empty() || x.size() != y.size() || y.size() != noise_variance.size()) {
    throw ConfigError("GP fit needs equally sized, non-empty x, y and noise");
  }
  x_ = x;
  const double n = static_cast<double>(y.size());
  y_mean_ = 0.0;
  for (double v : y) y_mean_ += v;
  y_mean_ /= n;
  double var = 0.0;
  for (double v : y) var += (v - y_mean_) * (v - y_mean_);
  var = y.size() > 1 ? var / (n - 1.0) : 0.0;
  // A flat objective keeps unit scale so the noise terms stay meaningful.
  y_scale_ = var > 1e-300 ? std::sqrt(var) : 1.0;
  y_std_.resize(y.size());
  noise_std_.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y_std_[i] = (y[i] - y_mean_) / y_scale_;
    noise_std_[i] = std::max(0.0, noise_variance[i]) / (y_scale_ * y_scale_);
  }
  if (refit_hyperparameters) {
    double best = -std::numeric_limits<double>::infinity();
    for (double ls : kLengthScales) {
      for (double sv : kSignalVariances) {
        const GpHyperparameters h{ls, sv};
        const double ll = log_marginal_likelihood(h);
        if (ll > best) {
          best = ll;
          hyper_ = h;
        }
      }
    }
  }
  factorize();
}

double GaussianProcess::log_marginal_likelihood(const GpHyperparameters& hyper) const {
  const Eigen::LLT<Eigen::MatrixXd> llt(gram(x_, noise_std_, hyper));
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Eigen::Map<const Eigen::VectorXd> y(y_std_.data(), static_cast<Eigen::Index>(y_std_.size()));
  const Eigen::VectorXd a = llt.solve(y);
  const Eigen::MatrixXd l = llt.matrixL();
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  return -0.5 * y.dot(a) - 0.5 * log_det - 0.5 * static_cast<double>(y_std_.size()) * std::log(2.0 * std::numbers::pi);
}

void GaussianProcess::factorize() {
  auto f = std::make_unique<Factor>();
  f->llt.compute(gram(x_, noise_std_, hyper_));
  if (f->llt.info() != Eigen::Success) throw DegenerateDesignError("GP covariance is not positive definite");
  const Eigen::Map<const Eigen::VectorXd> y(y_std_.data(), static_cast<Eigen::Index>(y_std_.size()));
  f->alpha = f->llt.solve(y);
  factor_ = std::move(f);
}

std::vector<GpPrediction> GaussianProcess::predict(const std::vector<std::vector<double>>& points) const {
  if (!factor_) throw LifecycleError("GP must be fitted before predicting");
  const auto n = static_cast<Eigen::Index>(x_.size());
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd ks(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      ks(i, j) = kernel(x_[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)], hyper_);
    }
  }
  const Eigen::VectorXd mean = ks.transpose() * factor_->alpha;
  const Eigen::MatrixXd v = factor_->llt.matrixL().solve(ks);
  std::vector<GpPrediction> out(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    const double var = std::max(0.0, hyper_.signal_variance - v.col(j).squaredNorm());
    out[static_cast<std::size_t>(j)] = {y_mean_ + y_scale_ * mean(j), y_scale_ * std::sqrt(var)};
  }
  return out;
}

GpPrediction GaussianProcess::predict(const std::vector<double>& x) const { 
  return predict(std::vector<std::vector<double>>{x}).front();
}

double expected_improvement(const GpPrediction& p, double incumbent) {
  const double gap = p.mean - incumbent;
  if (p.sd <= 1e-12) return std::max(0.0, gap);
  const double z = gap / p.sd;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return gap * cdf + p.sd * pdf;
}

}  // namespace metareason

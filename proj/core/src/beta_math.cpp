#include "metareason/beta_math.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <tuple>

#include <absl/container/flat_hash_map.h>

#include "metareason/error.hpp"

namespace metareason {

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double expected_max_with_constant(const BetaParams& arm, double m) {
  if (m <= 0.0) return std::max(arm.mean(), m);
  if (m >= 1.0) return m;
  return m * incomplete_beta(m, arm.alpha, arm.beta) +
         arm.mean() * (1.0 - incomplete_beta(m, arm.alpha + 1.0, arm.beta));
}

double expected_max_symmetric(const BetaParams& arm) {
  // max(t, 1-t) = t + (1 - 2t) 1{t < 1/2}
  const double mu = arm.mean();
  return mu + incomplete_beta(0.5, arm.alpha, arm.beta) - 2.0 * truncated_mean_below(arm, 0.5);
}

double truncated_mean_below(const BetaParams& arm, double t) {
  return arm.mean() * incomplete_beta(t, arm.alpha + 1.0, arm.beta);
}

double simpson(std::span<const double> samples, double step) {
  const std::size_t n = samples.size();
  if (n < 3 || n % 2 == 0) throw ConfigError("simpson needs an odd number (>= 3) of samples");
  double acc = samples.front() + samples.back();
  for (std::size_t i = 1; i + 1 < n; ++i) acc += samples[i] * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * step / 3.0;
}

namespace {

struct GridKey {
  double alpha;
  double beta;
  int points;
  friend bool operator==(const GridKey&, const GridKey&) = default;
  template <class H>
  friend H AbslHashValue(H h, const GridKey& k) {
    return H::combine(std::move(h), k.alpha, k.beta, k.points);
  }
};

class CdfGridCache {
 public:
  const std::vector<double>& get(const BetaParams& arm, int points) {
    const GridKey key{arm.alpha, arm.beta, points};
    {
      std::lock_guard lock(mutex_);
      if (auto it = grids_.find(key); it != grids_.end()) return *it->second;
    }
    auto grid = std::make_unique<std::vector<double>>(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) {
      (*grid)[static_cast<std::size_t>(j)] =
          incomplete_beta(static_cast<double>(j) / (points - 1), arm.alpha, arm.beta);
    }
    std::lock_guard lock(mutex_);
    auto [it, inserted] = grids_.try_emplace(key, std::move(grid));
    return *it->second;
  }

 private:
  std::mutex mutex_;
  // Values are heap-allocated so references survive rehashing.
  absl::flat_hash_map<GridKey, std::unique_ptr<std::vector<double>>> grids_;
};

CdfGridCache& cdf_cache() {
  static CdfGridCache cache;
  return cache;
}

}  // namespace

const std::vector<double>& beta_cdf_grid(const BetaParams& arm, int points) {
  if (points < 3 || points % 2 == 0) throw ConfigError("quadrature_points must be odd and >= 3");
  return cdf_cache().get(arm, points);
}

double expected_max_of_betas(std::span<const BetaParams> arms, int points) {
  if (arms.empty()) throw ConfigError("expected_max_of_betas needs at least one arm");
  std::vector<double> integrand(static_cast<std::size_t>(points), 1.0);
  for (const auto& arm : arms) {
    const auto& cdf = beta_cdf_grid(arm, points);
    for (std::size_t j = 0; j < integrand.size(); ++j) integrand[j] *= cdf[j];
  }
  for (double& v : integrand) v = 1.0 - v;
  return simpson(integrand, 1.0 / (points - 1));
}

}  // namespace metareason

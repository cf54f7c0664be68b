#include "metareason/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metareason/random.hpp"

namespace metareason {

void FeatureConfig::validate() const {
  if (method == FeatureMethod::kMonteCarlo && mc_samples < 100) {
    throw ConfigError("mc_samples must be >= 100 for Monte-Carlo features");
  }
  if (mc_samples < 1) throw ConfigError("mc_samples must be positive");
  if (quadrature_points < 3 || quadrature_points % 2 == 0) {
    throw ConfigError("quadrature_points must be odd and >= 3");
  }
}

std::uint64_t feature_seed(const FeatureConfig& config, std::uint64_t belief_hash, int computation) {
  const std::uint64_t base = mix_seed(config.seed, belief_hash);
  if (config.common_random_numbers) return base;
  return mix_seed(base, static_cast<std::uint64_t>(computation + 1));
}

namespace {

class Accumulator {
 public:
  void add(double x) noexcept {
    sum_ += x;
    sum_sq_ += x * x;
    ++n_;
  }
  McEstimate estimate(double offset) const {
    const double n = static_cast<double>(n_);
    const double mean = sum_ / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq_ - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean - offset, std::sqrt(var / n)};
  }

 private:
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  long n_ = 0;
};

void check_samples(int samples) {
  if (samples < 2) throw ConfigError("Monte-Carlo estimation needs at least 2 samples");
}

void check_computation(int computation, int count) {
  if (computation >= count) {
    throw InvalidActionError("computation index " + std::to_string(computation) + " out of range");
  }
}

double clamp_nonnegative(double x) { return std::max(0.0, x); }

template <class D>
double mc_feature(const D& domain, const typename D::Belief& belief, int computation,
                  const FeatureConfig& config) {
  const auto seed = feature_seed(config, domain.stable_hash(belief), computation);
  return clamp_nonnegative(vpi_monte_carlo(domain, belief, computation, config.mc_samples, seed).mean);
}

double best_other_mean(const std::vector<BetaParams>& arms, std::size_t skip) {
  double best = -1.0;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (i != skip) best = std::max(best, arms[i].mean());
  }
  return best;
}

// E[max(theta * fn, evac)] for theta ~ Beta: fn * E[theta; theta < t] + evac * P(theta >= t).
double tornado_city_perfect(const BetaParams& city, const TornadoCosts& costs) {
  const double t = costs.evacuate / costs.false_negative;
  return costs.false_negative * truncated_mean_below(city, t) +
         costs.evacuate * (1.0 - incomplete_beta(t, city.alpha, city.beta));
}

// Distribution of an integer path sum over [-(h+1), h+1].
class SumDist {
 public:
  explicit SumDist(int bound) : bound_(bound), p_(static_cast<std::size_t>(2 * bound + 1), 0.0) {}

  static SumDist point(int bound, int value) {
    SumDist d(bound);
    d.at(value) = 1.0;
    return d;
  }

  double& at(int value) { return p_[static_cast<std::size_t>(value + bound_)]; }
  double at(int value) const { return p_[static_cast<std::size_t>(value + bound_)]; }

  /// Adds an independent node reward: fixed if revealed, +-1 otherwise.
  SumDist plus_node(int value, bool random) const {
    if (!random) return shifted(value);
    SumDist out(bound_);
    for (int v = -bound_; v <= bound_; ++v) {
      const double mass = at(v);
      if (mass == 0.0) continue;
      out.at(v + 1) += 0.5 * mass;
      out.at(v - 1) += 0.5 * mass;
    }
    return out;
  }

  SumDist shifted(int delta) const {
    SumDist out(bound_);
    for (int v = -bound_; v <= bound_; ++v) {
      if (at(v) != 0.0) out.at(v + delta) += at(v);
    }
    return out;
  }

  /// Distribution of max(X, Y) for independent X ~ this, Y ~ other.
  SumDist max_with(const SumDist& other) const {
    SumDist out(bound_);
    double cdf_a = 0.0;
    double cdf_b = 0.0;
    double prev = 0.0;
    for (int v = -bound_; v <= bound_; ++v) {
      cdf_a += at(v);
      cdf_b += other.at(v);
      const double joint = cdf_a * cdf_b;
      out.at(v) = joint - prev;
      prev = joint;
    }
    return out;
  }

  SumDist max_with(int constant) const {
    SumDist out(bound_);
    for (int v = -bound_; v <= bound_; ++v) out.at(std::max(v, constant)) += at(v);
    return out;
  }

  double mean() const {
    double m = 0.0;
    for (int v = -bound_; v <= bound_; ++v) m += v * at(v);
    return m;
  }

 private:
  int bound_;
  std::vector<double> p_;
};

// Best downward path sum from every node under the current expected values.
std::vector<int> best_down(const TreeBelief& belief) {
  const int nodes = belief.num_nodes();
  std::vector<int> down(static_cast<std::size_t>(nodes));
  for (int i = nodes - 1; i >= 0; --i) {
    int below = 0;
    if (!tree_layout::is_leaf(i, nodes)) {
      below = std::max(down[static_cast<std::size_t>(tree_layout::left_child(i))],
                       down[static_cast<std::size_t>(tree_layout::right_child(i))]);
    }
    down[static_cast<std::size_t>(i)] = belief.values[static_cast<std::size_t>(i)] + below;
  }
  return down;
}

// Distribution of the best downward path from every node when all unrevealed
// rewards below it are drawn from the belief.
std::vector<SumDist> perfect_down(const TreeBelief& belief) {
  const int nodes = belief.num_nodes();
  const int bound = belief.height + 1;
  std::vector<SumDist> dist(static_cast<std::size_t>(nodes), SumDist(bound));
  for (int i = nodes - 1; i >= 0; --i) {
    const int v = belief.values[static_cast<std::size_t>(i)];
    SumDist below = SumDist::point(bound, 0);
    if (!tree_layout::is_leaf(i, nodes)) {
      below = dist[static_cast<std::size_t>(tree_layout::left_child(i))].max_with(
          dist[static_cast<std::size_t>(tree_layout::right_child(i))]);
    }
    dist[static_cast<std::size_t>(i)] = below.plus_node(v, v == 0);
  }
  return dist;
}

// Reveal the subtree of c and its ancestors; every other node keeps its mean.
double tree_vpi_sub_exact(const TreeBelief& belief, int computation, const std::vector<int>& down,
                          const std::vector<SumDist>& perfect) {
  SumDist r = perfect[static_cast<std::size_t>(computation)];
  int child = computation;
  while (child > 0) {
    const int a = tree_layout::parent(child);
    const int sibling = child % 2 == 1 ? child + 1 : child - 1;
    const int v = belief.values[static_cast<std::size_t>(a)];
    r = r.max_with(down[static_cast<std::size_t>(sibling)]).plus_node(v, v == 0);
    child = a;
  }
  return r.mean();
}

void check_tree(const TreeDomain& domain, const TreeBelief& belief) {
  if (belief.height != domain.height() || belief.num_nodes() != domain.num_nodes()) {
    throw ConstraintError("tree belief shape does not match the domain");
  }
}

}  // namespace

// ---- stopping ---------------------------------------------------------------

double vpi(const StoppingDomain& domain, const StoppingBelief& belief, const FeatureConfig& config) {
  if (config.method == FeatureMethod::kMonteCarlo) return mc_feature(domain, belief, -1, config);
  const double perfect = expected_max_symmetric({belief.alpha, belief.beta});
  const double scaled = domain.scale() == StoppingScale::kSigned ? 2.0 * perfect - 1.0 : perfect;
  return clamp_nonnegative(scaled - domain.terminal_utility(belief));
}

double vpi_sub(const StoppingDomain& domain, const StoppingBelief& belief, int computation,
               const FeatureConfig& config) {
  check_computation(computation, 1);
  if (config.method == FeatureMethod::kMonteCarlo) return mc_feature(domain, belief, computation, config);
  return vpi(domain, belief, config);
}

McEstimate vpi_monte_carlo(const StoppingDomain& domain, const StoppingBelief& belief, int computation,
                           int samples, std::uint64_t seed) {
  check_samples(samples);
  check_computation(computation, 1);
  Rng rng(seed);
  Accumulator acc;
  for (int s = 0; s < samples; ++s) acc.add(domain.utility_given_theta(sample_beta(rng, belief.alpha, belief.beta)));
  return acc.estimate(domain.terminal_utility(belief));
}

std::vector<FeatureVector> features_all(const StoppingDomain& domain, const StoppingBelief& belief,
                                        const FeatureConfig& config) {
  const double v = vpi(domain, belief, config);
  const double sub = config.method == FeatureMethod::kMonteCarlo ? vpi_sub(domain, belief, 0, config) : v;
  return {FeatureVector{voi1(domain, belief, 0), v, sub, domain.spec().cost}};
}

// ---- bandit -----------------------------------------------------------------

double vpi(const BanditDomain& domain, const BanditBelief& belief, const FeatureConfig& config) {
  if (config.method == FeatureMethod::kMonteCarlo) return mc_feature(domain, belief, -1, config);
  return clamp_nonnegative(expected_max_of_betas(belief.arms, config.quadrature_points) -
                           domain.terminal_utility(belief));
}

double vpi_sub(const BanditDomain& domain, const BanditBelief& belief, int computation,
               const FeatureConfig& config) {
  check_computation(computation, domain.num_arms());
  if (config.method == FeatureMethod::kMonteCarlo) return mc_feature(domain, belief, computation, config);
  const auto i = static_cast<std::size_t>(computation);
  const double m = best_other_mean(belief.arms, i);
  return clamp_nonnegative(expected_max_with_constant(belief.arms.at(i), m) - domain.terminal_utility(belief));
}

McEstimate vpi_monte_carlo(const BanditDomain& domain, const BanditBelief& belief, int computation,
                           int samples, std::uint64_t seed) {
  check_samples(samples);
  check_computation(computation, domain.num_arms());
  Rng rng(seed);
  Accumulator acc;
  const double m = computation >= 0 ? best_other_mean(belief.arms, static_cast<std::size_t>(computation)) : 0.0;
  std::vector<double> theta(belief.arms.size());
  for (int s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = sample_beta(rng, belief.arms[i].alpha, belief.arms[i].beta);
    if (computation < 0) {
      acc.add(*std::max_element(theta.begin(), theta.end()));
    } else {
      acc.add(std::max(theta[static_cast<std::size_t>(computation)], m));
    }
  }
  return acc.estimate(domain.terminal_utility(belief));
}

std::vector<FeatureVector> features_all(const BanditDomain& domain, const BanditBelief& belief,
                                        const FeatureConfig& config) {
  const double v = vpi(domain, belief, config);
  std::vector<FeatureVector> out;
  out.reserve(static_cast<std::size_t>(domain.num_arms()));
  for (int c = 0; c < domain.num_arms(); ++c) {
    out.push_back({voi1(domain, belief, c), v, vpi_sub(domain, belief, c, config), domain.spec().cost});
  }
  return out;
}

// ---- tree -------------------------------------------------------------------

std::vector<double> tree_voi1_all(const TreeBelief& belief) {
  const int nodes = belief.num_nodes();
  const auto down = best_down(belief);
  const int u = down[0];
  // prefix: sum of ancestor values strictly above n; avoid: best path missing n's subtree.
  constexpr int kNone = -(1 << 20);
  std::vector<int> prefix(static_cast<std::size_t>(nodes), 0);
  std::vector<int> avoid(static_cast<std::size_t>(nodes), kNone);
  std::vector<double> out(static_cast<std::size_t>(nodes), 0.0);
  for (int n = 0; n < nodes; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (n > 0) {
      const int p = tree_layout::parent(n);
      const int sibling = n % 2 == 1 ? n + 1 : n - 1;
      const auto up = static_cast<std::size_t>(p);
      prefix[un] = prefix[up] + belief.values[up];
      avoid[un] = std::max(avoid[up], prefix[un] + down[static_cast<std::size_t>(sibling)]);
    }
    if (belief.values[un] != 0) continue;
    const int through = prefix[un] + down[un];
    const double after = 0.5 * std::max(through + 1, avoid[un]) + 0.5 * std::max(through - 1, avoid[un]);
    out[un] = clamp_nonnegative(after - u);
  }
  return out;
}

double vpi(const TreeDomain& domain, const TreeBelief& belief, const FeatureConfig& config) {
  check_tree(domain, belief);
  if (config.method == FeatureMethod::kMonteCarlo) return mc_feature(domain, belief, -1, config);
  return clamp_nonnegative(perfect_down(belief)[0].mean() - domain.terminal_utility(belief));
}

double vpi_sub(const TreeDomain& domain, const TreeBelief& belief, int computation,
               const FeatureConfig& config) {
  check_tree(domain, belief);
  check_computation(computation, domain.num_nodes());
  if (config.method == FeatureMethod::kMonteCarlo) return mc_feature(domain, belief, computation, config);
  const auto down = best_down(belief);
  return clamp_nonnegative(tree_vpi_sub_exact(belief, computation, down, perfect_down(belief)) - down[0]);
}

McEstimate vpi_monte_carlo(const TreeDomain& domain, const TreeBelief& belief, int computation,
                           int samples, std::uint64_t seed) {
  check_samples(samples);
  check_tree(domain, belief);
  check_computation(computation, domain.num_nodes());
  Rng rng(seed);
  Accumulator acc;
  std::vector<std::int8_t> theta(belief.values.size());
  for (int s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const std::int8_t draw = bernoulli(rng, 0.5) ? 1 : -1;
      const bool reveal = computation < 0 || domain.relevant(computation, static_cast<int>(i));
      theta[i] = belief.values[i] != 0 ? belief.values[i] : (reveal ? draw : 0);
    }
    acc.add(domain.utility_given_theta(theta));
  }
  return acc.estimate(domain.terminal_utility(belief));
}

std::vector<FeatureVector> features_all(const TreeDomain& domain, const TreeBelief& belief,
                                        const FeatureConfig& config) {
  check_tree(domain, belief);
  const auto myopic = tree_voi1_all(belief);
  const double v = vpi(domain, belief, config);
  std::vector<FeatureVector> out(static_cast<std::size_t>(domain.num_nodes()));
  if (config.method == FeatureMethod::kMonteCarlo) {
    for (int c = 0; c < domain.num_nodes(); ++c) {
      out[static_cast<std::size_t>(c)] = {myopic[static_cast<std::size_t>(c)], v,
                                          vpi_sub(domain, belief, c, config), domain.spec().cost};
    }
    return out;
  }
  const auto down = best_down(belief);
  const auto perfect = perfect_down(belief);
  for (int c = 0; c < domain.num_nodes(); ++c) {
    const double sub = clamp_nonnegative(tree_vpi_sub_exact(belief, c, down, perfect) - down[0]);
    out[static_cast<std::size_t>(c)] = {myopic[static_cast<std::size_t>(c)], v, sub, domain.spec().cost};
  }
  return out;
}

// ---- tornado ----------------------------------------------------------------

double vpi(const TornadoDomain& domain, const TornadoBelief& belief, const FeatureConfig& config) {
  if (config.method == FeatureMethod::kMonteCarlo) return mc_feature(domain, belief, -1, config);
  // Cities are independent and the utility is additive, so VPI is too.
  double total = 0.0;
  for (const auto& city : belief.cities) {
    total += tornado_city_perfect(city, domain.costs()) - domain.city_utility(city);
  }
  return clamp_nonnegative(total);
}

double vpi_sub(const TornadoDomain& domain, const TornadoBelief& belief, int computation,
               const FeatureConfig& config) {
  check_computation(computation, domain.num_cities());
  if (config.method == FeatureMethod::kMonteCarlo) return mc_feature(domain, belief, computation, config);
  const auto& city = belief.cities.at(static_cast<std::size_t>(computation));
  return clamp_nonnegative(tornado_city_perfect(city, domain.costs()) - domain.city_utility(city));
}

McEstimate vpi_monte_carlo(const TornadoDomain& domain, const TornadoBelief& belief, int computation,
                           int samples, std::uint64_t seed) {
  check_samples(samples);
  check_computation(computation, domain.num_cities());
  Rng rng(seed);
  Accumulator acc;
  for (int s = 0; s < samples; ++s) {
    double total = 0.0;
    for (std::size_t i = 0; i < belief.cities.size(); ++i) {
      const auto& city = belief.cities[i];
      const double theta = sample_beta(rng, city.alpha, city.beta);
      const bool reveal = computation < 0 || static_cast<int>(i) == computation;
      total += reveal ? domain.city_utility_given_theta(theta) : domain.city_utility(city);
    }
    acc.add(total);
  }
  return acc.estimate(domain.terminal_utility(belief));
}

std::vector<FeatureVector> features_all(const TornadoDomain& domain, const TornadoBelief& belief,
                                        const FeatureConfig& config) {
  std::vector<FeatureVector> out;
  out.reserve(static_cast<std::size_t>(domain.num_cities()));
  if (config.method == FeatureMethod::kMonteCarlo) {
    const double v = vpi(domain, belief, config);
    for (int c = 0; c < domain.num_cities(); ++c) {
      out.push_back({voi1(domain, belief, c), v, vpi_sub(domain, belief, c, config), 0.0});
    }
    return out;
  }
  double total = 0.0;
  for (int c = 0; c < domain.num_cities(); ++c) {
    const double sub = vpi_sub(domain, belief, c, config);
    total += sub;
    out.push_back({voi1(domain, belief, c), 0.0, sub, domain.spec().cost});
  }
  for (auto& f : out) f.vpi = total;
  return out;
}

}  // namespace metareason

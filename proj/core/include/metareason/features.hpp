#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "metareason/domains/bandit.hpp"
#include "metareason/domains/stopping.hpp"
#include "metareason/domains/tornado.hpp"
#include "metareason/domains/tree.hpp"
#include "metareason/meta_mdp.hpp"

namespace metareason {

/// Exact evaluation uses closed forms, quadrature or distribution DPs; Monte
/// Carlo samples theta from the belief.
enum class FeatureMethod { kExact, kMonteCarlo };

struct FeatureConfig {
  FeatureMethod method = FeatureMethod::kExact;
  int mc_samples = 3000;
  int quadrature_points = 513;
  /// Reuse one theta sample set for every computation at a belief.
  bool common_random_numbers = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FeatureVector {
  double voi1 = 0.0;
  double vpi = 0.0;
  double vpi_sub = 0.0;
  double cost = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

/// Myopic value of information: expected terminal utility after exactly one
/// computation, minus the current one. Exact over the finite support.
template <MetaMdp D>
double voi1(const D& domain, const typename D::Belief& belief, int computation) {
  const double current = domain.terminal_utility(belief);
  double expected = 0.0;
  for (const auto& outcome : enumerate_successors(domain, belief, MetaAction::compute(computation))) {
    expected += outcome.probability * domain.terminal_utility(outcome.belief);
  }
  return std::max(0.0, expected - current);
}

/// Monte-Carlo estimate of VOI1 from sampled transitions (used as an oracle).
template <MetaMdp D>
McEstimate voi1_monte_carlo(const D& domain, const typename D::Belief& belief, int computation,
                            int samples, std::uint64_t seed) {
  Rng rng(seed);
  const double current = domain.terminal_utility(belief);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double gain = domain.terminal_utility(domain.sample_successor(belief, computation, rng)) - current;
    sum += gain;
    sum_sq += gain * gain;
  }
  const double n = samples;
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

// Value of perfect information about every parameter.
double vpi(const StoppingDomain& domain, const StoppingBelief& belief, const FeatureConfig& config = {});
double vpi(const BanditDomain& domain, const BanditBelief& belief, const FeatureConfig& config = {});
double vpi(const TreeDomain& domain, const TreeBelief& belief, const FeatureConfig& config = {});
double vpi(const TornadoDomain& domain, const TornadoBelief& belief, const FeatureConfig& config = {});

// Value of perfect information about the parameters relevant to one computation.
double vpi_sub(const StoppingDomain& domain, const StoppingBelief& belief, int computation,
               const FeatureConfig& config = {});
double vpi_sub(const BanditDomain& domain, const BanditBelief& belief, int computation,
               const FeatureConfig& config = {});
double vpi_sub(const TreeDomain& domain, const TreeBelief& belief, int computation,
               const FeatureConfig& config = {});
double vpi_sub(const TornadoDomain& domain, const TornadoBelief& belief, int computation,
               const FeatureConfig& config = {});

// Raw Monte-Carlo estimators (no clamping). computation < 0 means full VPI.
McEstimate vpi_monte_carlo(const StoppingDomain& domain, const StoppingBelief& belief, int computation,
                           int samples, std::uint64_t seed);
McEstimate vpi_monte_carlo(const BanditDomain& domain, const BanditBelief& belief, int computation,
                           int samples, std::uint64_t seed);
McEstimate vpi_monte_carlo(const TreeDomain& domain, const TreeBelief& belief, int computation,
                           int samples, std::uint64_t seed);
McEstimate vpi_monte_carlo(const TornadoDomain& domain, const TornadoBelief& belief, int computation,
                           int samples, std::uint64_t seed);

/// Seed used for the theta samples of one (belief, computation) feature call.
std::uint64_t feature_seed(const FeatureConfig& config, std::uint64_t belief_hash, int computation);

/// All four features for every computation of the domain (VPI computed once).
std::vector<FeatureVector> features_all(const StoppingDomain& domain, const StoppingBelief& belief,
                                        const FeatureConfig& config = {});
std::vector<FeatureVector> features_all(const BanditDomain& domain, const BanditBelief& belief,
                                        const FeatureConfig& config = {});
std::vector<FeatureVector> features_all(const TreeDomain& domain, const TreeBelief& belief,
                                        const FeatureConfig& config = {});
std::vector<FeatureVector> features_all(const TornadoDomain& domain, const TornadoBelief& belief,
                                        const FeatureConfig& config = {});

/// Features of a single computation.
template <class D>
FeatureVector features(const D& domain, const typename D::Belief& belief, int computation,
                       const FeatureConfig& config = {}) {
  if (computation < 0 || computation >= domain.spec().num_computations) {
    throw InvalidActionError("computation index " + std::to_string(computation) + " out of range");
  }
  return FeatureVector{voi1(domain, belief, computation), vpi(domain, belief, config),
                       vpi_sub(domain, belief, computation, config), domain.spec().cost};
}

/// VOI1 of every tree node in O(k): a node only shifts the paths through it.
std::vector<double> tree_voi1_all(const TreeBelief& belief);

}  // namespace metareason

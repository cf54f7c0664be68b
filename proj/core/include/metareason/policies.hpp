#pragma once

#include <limits>
#include <string>
#include <vector>

#include "metareason/episode.hpp"
#include "metareason/features.hpp"

namespace metareason {

/// BMPS weights: (w1, w2, w3) on the simplex, w4 in [1, h].
struct WeightVector {
  double w1 = 1.0;
  double w2 = 0.0;
  double w3 = 0.0;
  double w4 = 1.0;

  void validate(int horizon) const;
  double score(const FeatureVector& f) const noexcept {
    return w1 * f.voi1 + w2 * f.vpi + w3 * f.vpi_sub - w4 * f.cost;
  }
  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

inline constexpr double kNotAvailable = -std::numeric_limits<double>::infinity();

/// Argmax over available scores with lowest-index tie-break; computes only when
/// the best score is strictly positive.
MetaAction act_on_scores(const std::vector<double>& scores);

template <MetaMdp D>
bool at_forced_termination(const D& domain, const typename D::Belief& belief) {
  return belief.step >= domain.spec().horizon - 1;
}

/// VOI1 of every computation (kNotAvailable for non-informative ones).
template <MetaMdp D>
std::vector<double> voi1_all(const D& domain, const typename D::Belief& belief) {
  std::vector<double> out(static_cast<std::size_t>(domain.spec().num_computations), kNotAvailable);
  for (int c = 0; c < domain.spec().num_computations; ++c) {
    if (domain.is_informative(belief, c)) out[static_cast<std::size_t>(c)] = voi1(domain, belief, c);
  }
  return out;
}

std::vector<double> voi1_all(const TreeDomain& domain, const TreeBelief& belief);

/// VOC-hat of every computation under the given weights.
template <MetaMdp D>
std::vector<double> bmps_scores(const D& domain, const typename D::Belief& belief,
                                const WeightVector& weights, const FeatureConfig& config = {}) {
  const auto features = features_all(domain, belief, config);
  std::vector<double> scores(features.size(), kNotAvailable);
  for (std::size_t c = 0; c < features.size(); ++c) {
    if (domain.is_informative(belief, static_cast<int>(c))) scores[c] = weights.score(features[c]);
  }
  return scores;
}

template <MetaMdp D>
MetaAction bmps_act(const D& domain, const typename D::Belief& belief, const WeightVector& weights,
                    const FeatureConfig& config = {}) {
  weights.validate(domain.spec().horizon);
  if (belief.terminated) throw LifecycleError("cannot act on an absorbing belief");
  if (at_forced_termination(domain, belief)) return MetaAction::terminate();
  return act_on_scores(bmps_scores(domain, belief, weights, config));
}

/// Meta-greedy: argmax of VOI1 - cost, as if each computation were the last.
template <MetaMdp D>
MetaAction meta_greedy_act(const D& domain, const typename D::Belief& belief) {
  if (belief.terminated) throw LifecycleError("cannot act on an absorbing belief");
  if (at_forced_termination(domain, belief)) return MetaAction::terminate();
  auto scores = voi1_all(domain, belief);
  for (double& s : scores) s -= domain.spec().cost;
  return act_on_scores(scores);
}

/// Deliberate until forced to stop. Picks the informative computation with the
/// least evidence so far (lowest index on ties), spreading samples evenly.
template <MetaMdp D>
MetaAction full_deliberation_act(const D& domain, const typename D::Belief& belief) {
  if (at_forced_termination(domain, belief)) return MetaAction::terminate();
  int best = -1;
  int best_count = 0;
  for (int c = 0; c < domain.spec().num_computations; ++c) {
    if (!domain.is_informative(belief, c)) continue;
    const int count = domain.evidence_count(belief, c);
    if (best < 0 || count < best_count) {
      best = c;
      best_count = count;
    }
  }
  return best < 0 ? MetaAction::terminate() : MetaAction::compute(best);
}

/// Round-robin over cities until the simulation budget is spent.
MetaAction uniform_allocation_act(const TornadoDomain& domain, const TornadoBelief& belief);

/// Value of the single-arm metalevel MDP for arm (alpha, beta) against a fixed
/// alternative worth `other`, with `remaining` computations left.
double blinkered_arm_value(const BetaParams& arm, double other, double cost, int remaining);

/// Q-values minus U(b) of the blinkered approximation, per arm.
std::vector<double> blinkered_vocs(const BanditDomain& domain, const BanditBelief& belief);
MetaAction blinkered_act(const BanditDomain& domain, const BanditBelief& belief);

/// Q^RB(b, c) - U(b) per node (kNotAvailable for revealed nodes). The subproblem
/// of a node may only continue with unrevealed nodes of its own subtree.
std::vector<double> recursively_blinkered_vocs(const TreeDomain& domain, const TreeBelief& belief);
MetaAction recursively_blinkered_act(const TreeDomain& domain, const TreeBelief& belief);

// Policy objects for the episode runner. Domains are captured by value.
template <MetaMdp D>
Policy<typename D::Belief> make_bmps_policy(const D& domain, const WeightVector& weights,
                                            const FeatureConfig& config = {}) {
  weights.validate(domain.spec().horizon);
  config.validate();
  return [domain, weights, config](const typename D::Belief& b) { return bmps_act(domain, b, weights, config); };
}

template <MetaMdp D>
Policy<typename D::Belief> make_meta_greedy_policy(const D& domain) {
  return [domain](const typename D::Belief& b) { return meta_greedy_act(domain, b); };
}

template <MetaMdp D>
Policy<typename D::Belief> make_full_policy(const D& domain) {
  return [domain](const typename D::Belief& b) { return full_deliberation_act(domain, b); };
}

template <class Belief>
Policy<Belief> make_terminate_policy() {
  return [](const Belief&) { return MetaAction::terminate(); };
}

Policy<TornadoBelief> make_uniform_policy(const TornadoDomain& domain);
Policy<BanditBelief> make_blinkered_policy(const BanditDomain& domain);
Policy<TreeBelief> make_recursively_blinkered_policy(const TreeDomain& domain);

}  // namespace metareason

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "metareason/meta_mdp.hpp"

namespace metareason {

/// A metalevel policy maps a live belief to the next metalevel action.
template <class Belief>
using Policy = std::function<MetaAction(const Belief&)>;

template <class Belief>
struct EpisodeTrace {
  std::vector<MetaAction> actions;
  std::vector<double> rewards;
  Belief final_belief;
  double return_total = 0.0;
  std::uint64_t seed = 0;
};

/// Simulate one episode. The runner forces Terminate at step h-1, so every
/// trace has at most h actions and ends with exactly one Terminate.
template <MetaMdp D>
EpisodeTrace<typename D::Belief> run_episode(const D& domain, const typename D::Belief& initial,
                                             const Policy<typename D::Belief>& policy,
                                             std::uint64_t seed) {
  Rng rng(seed);
  EpisodeTrace<typename D::Belief> trace{{}, {}, initial, 0.0, seed};
  auto belief = initial;
  const int last_step = domain.spec().horizon - 1;
  while (true) {
    const MetaAction action = belief.step >= last_step ? MetaAction::terminate() : policy(belief);
    auto [next, reward] = sample_transition(domain, belief, action, rng);
    trace.actions.push_back(action);
    trace.rewards.push_back(reward);
    belief = std::move(next);
    if (action.is_terminate()) break;
  }
  // Summed in order so the total is bit-reproducible.
  trace.return_total = std::accumulate(trace.rewards.begin(), trace.rewards.end(), 0.0);
  trace.final_belief = std::move(belief);
  return trace;
}

/// Same as run_episode but only returns the episode return.
template <MetaMdp D>
double episode_return(const D& domain, const typename D::Belief& initial,
                      const Policy<typename D::Belief>& policy, std::uint64_t seed) {
  Rng rng(seed);
  auto belief = initial;
  const int last_step = domain.spec().horizon - 1;
  double total = 0.0;
  while (true) {
    const MetaAction action = belief.step >= last_step ? MetaAction::terminate() : policy(belief);
    auto [next, reward] = sample_transition(domain, belief, action, rng);
    total += reward;
    if (action.is_terminate()) return total;
    belief = std::move(next);
  }
}

inline constexpr double kZ95 = 1.959963984540054;

struct EvalReport {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  int n = 0;
  std::uint64_t seed = 0;   // base seed; episode i used seed + i
  std::vector<double> returns;

  double half_width() const { return 0.5 * (ci_hi - ci_lo); }
};

/// Mean, sample sd and 95% normal-approximation CI of a sample.
EvalReport summarize(std::span<const double> values, std::uint64_t seed = 0);

template <MetaMdp D>
EvalReport evaluate_policy(const D& domain, const typename D::Belief& initial,
                           const Policy<typename D::Belief>& policy, int n_episodes,
                           std::uint64_t base_seed) {
  if (n_episodes < 1) throw ConfigError("n_episodes must be >= 1");
  std::vector<double> returns;
  returns.reserve(static_cast<std::size_t>(n_episodes));
  for (int i = 0; i < n_episodes; ++i) {
    returns.push_back(episode_return(domain, initial, policy, base_seed + static_cast<std::uint64_t>(i)));
  }
  return summarize(returns, base_seed);
}

/// Paired difference a - b over episodes that used identical seeds.
struct PairedComparison {
  double mean_diff = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  int n = 0;
};

PairedComparison compare_paired(std::span<const double> a, std::span<const double> b);

}  // namespace metareason

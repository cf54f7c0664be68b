#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metareason/beta_math.hpp"
#include "metareason/meta_mdp.hpp"

namespace metareason {

struct BanditBelief {
  std::vector<BetaParams> arms;
  int step = 0;
  bool terminated = false;

  friend bool operator==(const BanditBelief&, const BanditBelief&) = default;
};

/// Max posterior mean over arms.
double bandit_terminal(const BanditBelief& belief);

/// Bernoulli metalevel probability model: k Beta-Bernoulli arms, computation
/// c_i simulates arm i, and only the final (object-level) pull is rewarded.
class BanditDomain {
 public:
  using Belief = BanditBelief;

  BanditDomain(int num_arms, double cost, int horizon = 25);

  const MetaMdpSpec& spec() const noexcept { return spec_; }
  int num_arms() const noexcept { return spec_.num_computations; }
  int num_parameters() const noexcept { return spec_.num_computations; }

  Belief initial_belief() const;
  double terminal_utility(const Belief& belief) const;

  std::vector<Outcome<Belief>> successors(const Belief& belief, int computation) const;
  Belief sample_successor(const Belief& belief, int computation, Rng& rng) const;
  bool is_informative(const Belief&, int) const noexcept { return true; }
  int evidence_count(const Belief& belief, int computation) const;
  bool relevant(int computation, int parameter) const noexcept { return computation == parameter; }

  void validate(const Belief& belief) const;
  std::uint64_t stable_hash(const Belief& belief) const;
  /// Arms are sorted inside the key: values are invariant under arm permutation.
  BeliefKey canonical_key(const Belief& belief) const;
  std::string describe_key(const BeliefKey& key) const;

 private:
  void check_arm_count(const Belief& belief) const;

  MetaMdpSpec spec_;
};

}  // namespace metareason

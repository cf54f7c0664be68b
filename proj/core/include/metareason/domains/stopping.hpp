#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metareason/beta_math.hpp"
#include "metareason/meta_mdp.hpp"

namespace metareason {

/// Scale of the terminal reward of the stopping problem: +1/-1 for a
/// correct/incorrect prediction, or the probability of being correct.
enum class StoppingScale { kSigned, kProbability };

struct StoppingBelief {
  double alpha = 1.0;
  double beta = 1.0;
  int step = 0;
  bool terminated = false;

  friend bool operator==(const StoppingBelief&, const StoppingBelief&) = default;
};

/// Probability that the modal prediction under Beta(alpha, beta) is correct.
double p_correct(const StoppingBelief& belief);

/// Terminal reward on the signed scale: 2 * p_correct - 1.
double stopping_terminal(const StoppingBelief& belief);

/// When to stop deliberating about a binary prediction. One computation draws
/// a Bernoulli(theta) observation; theta ~ Beta(alpha, beta).
class StoppingDomain {
 public:
  using Belief = StoppingBelief;

  explicit StoppingDomain(double cost, int horizon = 30, StoppingScale scale = StoppingScale::kSigned);

  const MetaMdpSpec& spec() const noexcept { return spec_; }
  StoppingScale scale() const noexcept { return scale_; }
  int num_parameters() const noexcept { return 1; }

  Belief initial_belief() const { return Belief{}; }
  double terminal_utility(const Belief& belief) const;
  /// Terminal utility once theta is known exactly.
  double utility_given_theta(double theta) const;

  std::vector<Outcome<Belief>> successors(const Belief& belief, int computation) const;
  Belief sample_successor(const Belief& belief, int computation, Rng& rng) const;
  bool is_informative(const Belief&, int) const noexcept { return true; }
  int evidence_count(const Belief& belief, int) const noexcept {
    return static_cast<int>(belief.alpha + belief.beta);
  }
  bool relevant(int, int) const noexcept { return true; }

  void validate(const Belief& belief) const;
  std::uint64_t stable_hash(const Belief& belief) const;
  /// Key of (alpha, beta, remaining computations); integral parameters only.
  BeliefKey canonical_key(const Belief& belief) const;
  std::string describe_key(const BeliefKey& key) const;

 private:
  MetaMdpSpec spec_;
  StoppingScale scale_;
};

}  // namespace metareason

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metareason/beta_math.hpp"
#include "metareason/meta_mdp.hpp"

namespace metareason {

struct TornadoBelief {
  std::vector<BetaParams> cities;
  int sims_remaining = 0;
  int step = 0;
  bool terminated = false;

  friend bool operator==(const TornadoBelief&, const TornadoBelief&) = default;
};

struct TornadoCosts {
  double false_negative = -20.0;  // not evacuating a heavily hit city
  double evacuate = -1.0;
};

/// Total time T split between metareasoning and simulation, all in hours.
struct TornadoTimingModel {
  double total_time = 24.0;
  double sim_duration = 0.5;
  double metareason_duration = 0.0;
};

/// Simulations that fit in the time budget: floor(T / (t_MR + t_sim)).
int tornado_budget(const TornadoTimingModel& timing);

/// Expected utility of the best per-city evacuation decisions.
double tornado_terminal(const TornadoBelief& belief, const TornadoCosts& costs = {});

/// Evacuate city i iff that is strictly better in expectation; ties keep the city.
std::vector<bool> evacuation_decisions(const TornadoBelief& belief, const TornadoCosts& costs = {});

/// Tornado evacuation scenario: k cities, each simulation of city i is a
/// Bernoulli draw updating Beta(alpha_i, beta_i). Simulations are free, but the
/// budget (horizon - 1) is fixed.
class TornadoDomain {
 public:
  using Belief = TornadoBelief;

  TornadoDomain(int num_cities, int budget, BetaParams prior = {0.1, 0.9}, TornadoCosts costs = {});

  const MetaMdpSpec& spec() const noexcept { return spec_; }
  int num_cities() const noexcept { return spec_.num_computations; }
  int num_parameters() const noexcept { return spec_.num_computations; }
  int budget() const noexcept { return spec_.horizon - 1; }
  const TornadoCosts& costs() const noexcept { return costs_; }
  const BetaParams& prior() const noexcept { return prior_; }

  Belief initial_belief() const;
  double terminal_utility(const Belief& belief) const;
  /// Contribution of one city to the terminal utility.
  double city_utility(const BetaParams& city) const noexcept;
  /// City utility when its damage probability theta is known.
  double city_utility_given_theta(double theta) const noexcept;

  std::vector<Outcome<Belief>> successors(const Belief& belief, int computation) const;
  Belief sample_successor(const Belief& belief, int computation, Rng& rng) const;
  bool is_informative(const Belief& belief, int) const noexcept { return belief.sims_remaining > 0; }
  int evidence_count(const Belief& belief, int computation) const;
  bool relevant(int computation, int parameter) const noexcept { return computation == parameter; }

  void validate(const Belief& belief) const;
  std::uint64_t stable_hash(const Belief& belief) const;
  BeliefKey canonical_key(const Belief& belief) const;
  std::string describe_key(const BeliefKey& key) const;

 private:
  void check_city_count(const Belief& belief) const;

  MetaMdpSpec spec_;
  BetaParams prior_;
  TornadoCosts costs_;
};

}  // namespace metareason

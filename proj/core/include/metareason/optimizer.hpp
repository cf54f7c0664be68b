#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "metareason/episode.hpp"
#include "metareason/features.hpp"
#include "metareason/policies.hpp"

namespace metareason {

enum class SearchMode { kBayesian, kQuasiRandom };

struct SearchSpec {
  int iterations = 10;
  int episodes_per_eval = 1000;
  int top_k_rescore = 5;
  int rescore_episodes = 5000;
  int test_episodes = 2000;  // used by callers that report a held-out score
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::kBayesian;
  int initial_points = 10;
  int acquisition_candidates = 4096;

  void validate() const;

  /// Protocols for "stopping", "bandit", "tree"; "tornado" shares the bandit one.
  static SearchSpec paper_preset(std::string_view domain);
};

/// Search coordinates: (w1, w2, log(w4) / log(h)). The simplex constraint is
/// w1 + w2 <= 1 with w3 the remainder.
using SearchPoint = std::array<double, 3>;

WeightVector weights_from_point(const SearchPoint& x, int horizon);
SearchPoint point_from_weights(const WeightVector& w, int horizon);

struct Candidate {
  WeightVector weights;
  SearchPoint point{};
  double mean_return = 0.0;
  double standard_error = 0.0;
  int n_episodes = 0;
};

struct SearchResult {
  WeightVector best;
  std::vector<Candidate> trace;       // every probe in order
  std::vector<double> best_so_far;    // running max of trace means
  std::vector<Candidate> rescored;    // top candidates re-evaluated on fresh episodes
};

/// Scores a weight vector over n episodes whose seeds start at base_seed.
using Objective = std::function<EvalReport(const WeightVector&, int n_episodes, std::uint64_t base_seed)>;

/// Radical-inverse Halton point (index >= 1) in [0,1)^3 with bases 2, 3, 5.
std::array<double, 3> halton3(std::uint64_t index);

/// Maps a unit-cube point to a feasible search point, uniformly on the simplex.
SearchPoint cube_to_point(const std::array<double, 3>& u);

/// Bayesian optimisation of the BMPS weights. Training probes share one block
/// of episode seeds, so their scores are directly comparable.
SearchResult optimize_weights(const Objective& objective, int horizon, const SearchSpec& spec);

/// Re-evaluate the k best candidates on `rescore_episodes` fresh episodes and
/// return them with the winner first.
std::vector<Candidate> rescore_top_candidates(const std::vector<Candidate>& candidates, int k,
                                              int rescore_episodes, const Objective& objective,
                                              std::uint64_t seed);

/// Episode seed blocks derived from a search seed.
std::uint64_t training_seed(std::uint64_t search_seed);
std::uint64_t rescore_seed(std::uint64_t search_seed);
std::uint64_t test_seed(std::uint64_t search_seed);

template <MetaMdp D>
Objective bmps_objective(const D& domain, const FeatureConfig& config = {}) {
  return [domain, config](const WeightVector& w, int n, std::uint64_t seed) {
    return evaluate_policy(domain, domain.initial_belief(), make_bmps_policy(domain, w, config), n, seed);
  };
}

template <MetaMdp D>
SearchResult optimize_weights(const D& domain, const SearchSpec& spec, const FeatureConfig& config = {}) {
  return optimize_weights(bmps_objective(domain, config), domain.spec().horizon, spec);
}

}  // namespace metareason

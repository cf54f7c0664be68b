#include "metareason/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "metareason/gaussian_process.hpp"
#include "metareason/random.hpp"

namespace metareason {

void SearchSpec::validate() const {
  if (iterations < 1) throw ConfigError("search needs at least one iteration");
  if (episodes_per_eval < 1) throw ConfigError("episodes_per_eval must be positive");
  if (top_k_rescore < 1) throw ConfigError("top_k_rescore must be positive");
  if (rescore_episodes < 1) throw ConfigError("rescore_episodes must be positive");
  if (test_episodes < 1) throw ConfigError("test_episodes must be positive");
  if (initial_points < 1) throw ConfigError("initial_points must be positive");
  if (acquisition_candidates < 1) throw ConfigError("acquisition_candidates must be positive");
}

SearchSpec SearchSpec::paper_preset(std::string_view domain) {
  SearchSpec s;
  if (domain == "stopping") {
    s.iterations = 500;
    s.episodes_per_eval = 2500;
    s.top_k_rescore = 1;
    s.rescore_episodes = 2500;
    s.test_episodes = 3000;
  } else if (domain == "bandit" || domain == "tornado") {
    s.iterations = 10;
    s.episodes_per_eval = 1000;
    s.top_k_rescore = 5;
    s.rescore_episodes = 5000;
    s.test_episodes = 2000;
  } else if (domain == "tree") {
    s.iterations = 100;
    s.episodes_per_eval = 1000;
    s.top_k_rescore = 3;
    s.rescore_episodes = 2000;
    s.test_episodes = 5000;
  } else {
    throw ConfigError("no search preset for domain '" + std::string(domain) + "'");
  }
  return s;
}

WeightVector weights_from_point(const SearchPoint& x, int horizon) {
  const double w1 = std::clamp(x[0], 0.0, 1.0);
  const double w2 = std::clamp(x[1], 0.0, 1.0 - w1);
  const double z = std::clamp(x[2], 0.0, 1.0);
  const double w4 = horizon > 1 ? std::clamp(std::pow(static_cast<double>(horizon), z), 1.0, static_cast<double>(horizon)) : 1.0;
  return {w1, w2, std::max(0.0, 1.0 - w1 - w2), w4};
}

SearchPoint point_from_weights(const WeightVector& w, int horizon) {
  const double z = horizon > 1 ? std::log(w.w4) / std::log(static_cast<double>(horizon)) : 0.0;
  return {w.w1, w.w2, std::clamp(z, 0.0, 1.0)};
}

std::array<double, 3> halton3(std::uint64_t index) {
  constexpr std::uint64_t kBases[3] = {2, 3, 5};
  std::array<double, 3> out{};
  for (int d = 0; d < 3; ++d) {
    double f = 1.0;
    double r = 0.0;
    for (std::uint64_t i = index; i > 0; i /= kBases[d]) {
      f /= static_cast<double>(kBases[d]);
      r += f * static_cast<double>(i % kBases[d]);
    }
    out[static_cast<std::size_t>(d)] = r;
  }
  return out;
}

SearchPoint cube_to_point(const std::array<double, 3>& u) {
  const double s = std::sqrt(u[0]);
  return {1.0 - s, s * (1.0 - u[1]), u[2]};
}

std::uint64_t training_seed(std::uint64_t search_seed) { return mix_seed(search_seed, 1); }
std::uint64_t rescore_seed(std::uint64_t search_seed) { return mix_seed(search_seed, 2); }
std::uint64_t test_seed(std::uint64_t search_seed) { return mix_seed(search_seed, 3); }

namespace {

Candidate probe(const Objective& objective, const SearchPoint& x, int horizon, int episodes,
                std::uint64_t seed) {
  Candidate c;
  c.weights = weights_from_point(x, horizon);
  c.point = point_from_weights(c.weights, horizon);
  const EvalReport r = objective(c.weights, episodes, seed);
  c.mean_return = r.mean;
  c.standard_error = r.n > 0 ? r.sd / std::sqrt(static_cast<double>(r.n)) : 0.0;
  c.n_episodes = r.n;
  return c;
}

SearchPoint random_point(Rng& rng) {
  double a = uniform01(rng);
  double b = uniform01(rng);
  if (a > b) std::swap(a, b);
  return {a, b - a, uniform01(rng)};
}

std::vector<double> as_vector(const SearchPoint& p) { return {p[0], p[1], p[2]}; }

}  // namespace

SearchResult optimize_weights(const Objective& objective, int horizon, const SearchSpec& spec) {
  spec.validate();
  if (horizon < 1) throw ConfigError("horizon must be positive");
  const std::uint64_t train = training_seed(spec.seed);
  Rng rng(mix_seed(spec.seed, 4));
  SearchResult result;
  GaussianProcess gp;
  std::uint64_t halton_index = 1;

  for (int it = 0; it < spec.iterations; ++it) {
    SearchPoint next;
    const bool model_guided = spec.mode == SearchMode::kBayesian && it >= spec.initial_points;
    if (!model_guided) {
      next = cube_to_point(halton3(halton_index++));
    } else {
      std::vector<std::vector<double>> x;
      std::vector<double> y;
      std::vector<double> noise;
      for (const auto& c : result.trace) {
        x.push_back(as_vector(c.point));
        y.push_back(c.mean_return);
        noise.push_back(c.standard_error * c.standard_error);
      }
      const auto n = result.trace.size();
      gp.fit(x, y, noise, n <= 100 || n % 10 == 0 || gp.size() == 0);
      double incumbent = -std::numeric_limits<double>::infinity();
      for (const auto& p : gp.predict(x)) incumbent = std::max(incumbent, p.mean);
      std::vector<SearchPoint> pool(static_cast<std::size_t>(spec.acquisition_candidates));
      std::vector<std::vector<double>> pool_x;
      pool_x.reserve(pool.size());
      for (auto& p : pool) {
        p = random_point(rng);
        pool_x.push_back(as_vector(p));
      }
      const auto preds = gp.predict(pool_x);
      std::size_t best = 0;
      double best_ei = -1.0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        const double ei = expected_improvement(preds[i], incumbent);
        if (ei > best_ei) {
          best_ei = ei;
          best = i;
        }
      }
      next = pool[best];
    }
    result.trace.push_back(probe(objective, next, horizon, spec.episodes_per_eval, train));
    const double running = result.best_so_far.empty()
                               ? result.trace.back().mean_return
                               : std::max(result.best_so_far.back(), result.trace.back().mean_return);
    result.best_so_far.push_back(running);
  }

  result.rescored = rescore_top_candidates(result.trace, std::min<int>(spec.top_k_rescore, spec.iterations),
                                           spec.rescore_episodes, objective, rescore_seed(spec.seed));
  result.best = result.rescored.front().weights;
  return result;
}

std::vector<Candidate> rescore_top_candidates(const std::vector<Candidate>& candidates, int k,
                                              int rescore_episodes, const Objective& objective,
                                              std::uint64_t seed) {
  if (candidates.empty()) throw ConfigError("no candidates to rescore");
  if (k < 1 || k > static_cast<int>(candidates.size())) {
    throw ConfigError("k must lie in [1, " + std::to_string(candidates.size()) + "]");
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  // Stable: earlier probes win ties.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].mean_return > candidates[b].mean_return;
  });
  if (k == 1) return {candidates[order.front()]};
  std::vector<Candidate> top;
  for (int i = 0; i < k; ++i) {
    Candidate c = candidates[order[static_cast<std::size_t>(i)]];
    const EvalReport r = objective(c.weights, rescore_episodes, seed);
    c.mean_return = r.mean;
    c.standard_error = r.n > 0 ? r.sd / std::sqrt(static_cast<double>(r.n)) : 0.0;
    c.n_episodes = r.n;
    top.push_back(c);
  }
  std::stable_sort(top.begin(), top.end(),
                   [](const Candidate& a, const Candidate& b) { return a.mean_return > b.mean_return; });
  return top;
}

}  // namespace metareason

#include <doctest.h>

#include <cmath>

#include "metareason/gaussian_process.hpp"
#include "metareason/optimizer.hpp"

using namespace metareason;
using doctest::Approx;

namespace {

EvalReport constant_report(double value, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n), value);
  return summarize(xs);
}

// Noiseless synthetic objective with its optimum at (0.2, 0.3, 0.5).
const Objective kQuadratic = [](const WeightVector& w, int n, std::uint64_t) {
  return constant_report(-(w.w1 - 0.2) * (w.w1 - 0.2) - (w.w2 - 0.3) * (w.w2 - 0.3), n);
};

}  // namespace

TEST_CASE("search presets") {
  const auto bandit = SearchSpec::paper_preset("bandit");
  CHECK(bandit.iterations == 10);
  CHECK(bandit.episodes_per_eval == 1000);
  CHECK(bandit.top_k_rescore == 5);
  CHECK(bandit.rescore_episodes == 5000);
  const auto stopping = SearchSpec::paper_preset("stopping");
  CHECK(stopping.iterations == 500);
  CHECK(stopping.episodes_per_eval == 2500);
  CHECK(stopping.top_k_rescore == 1);
  CHECK(stopping.test_episodes == 3000);
  const auto tree = SearchSpec::paper_preset("tree");
  CHECK(tree.iterations == 100);
  CHECK(tree.top_k_rescore == 3);
  CHECK(tree.rescore_episodes == 2000);
  CHECK_THROWS_AS(SearchSpec::paper_preset("chess"), ConfigError);
  SearchSpec zero;
  zero.iterations = 0;
  CHECK_THROWS_AS(optimize_weights(kQuadratic, 10, zero), ConfigError);
}

TEST_CASE("search coordinates map onto feasible weights") {
  for (std::uint64_t i = 1; i < 500; ++i) {
    const auto x = cube_to_point(halton3(i));
    const auto w = weights_from_point(x, 25);
    CHECK_NOTHROW(w.validate(25));
    const auto back = point_from_weights(w, 25);
    CHECK(back[0] == Approx(x[0]));
    CHECK(back[1] == Approx(x[1]));
    CHECK(back[2] == Approx(x[2]));
  }
  CHECK(weights_from_point({0, 0, 1}, 25).w4 == Approx(25));
  CHECK(weights_from_point({0, 0, 0}, 25).w4 == 1.0);
  CHECK(halton3(1)[0] == 0.5);
  CHECK(halton3(2)[1] == Approx(2.0 / 3.0));
}

TEST_CASE("gaussian process interpolates and reports uncertainty") {
  GaussianProcess gp;
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 12; ++i) {
    const double t = i / 11.0;
    x.push_back({t, 0.0, 0.0});
    y.push_back(std::sin(4 * t));
  }
  gp.fit(x, y, std::vector<double>(y.size(), 0.0));
  const auto at = gp.predict(std::vector<double>{5 / 11.0, 0.0, 0.0});
  CHECK(at.mean == Approx(std::sin(20 / 11.0)).epsilon(1e-3));
  const auto far = gp.predict(std::vector<double>{0.5, 3.0, 3.0});
  CHECK(far.sd > at.sd);
  CHECK(expected_improvement({1.0, 0.0}, 0.5) == Approx(0.5));
  CHECK(expected_improvement({0.0, 1.0}, 0.0) == Approx(1.0 / std::sqrt(2.0 * 3.141592653589793)));
  GaussianProcess unfitted;
  CHECK_THROWS_AS(unfitted.predict(std::vector<double>{0, 0, 0}), LifecycleError);
}

TEST_CASE("bayesian optimisation finds a synthetic optimum") {
  SearchSpec spec;
  spec.iterations = 60;
  spec.episodes_per_eval = 2;
  spec.top_k_rescore = 1;
  spec.seed = 3;
  const auto result = optimize_weights(kQuadratic, 10, spec);
  CHECK(std::abs(result.best.w1 - 0.2) <= 0.05);
  CHECK(std::abs(result.best.w2 - 0.3) <= 0.05);
  CHECK(std::abs(result.best.w3 - 0.5) <= 0.05);
  CHECK(result.trace.size() == 60);
  for (std::size_t i = 1; i < result.best_so_far.size(); ++i) {
    CHECK(result.best_so_far[i] >= result.best_so_far[i - 1]);
  }
  for (const auto& c : result.trace) CHECK_NOTHROW(c.weights.validate(10));
}

TEST_CASE("search is reproducible and the fallback mode works") {
  SearchSpec spec;
  spec.iterations = 15;
  spec.episodes_per_eval = 2;
  spec.top_k_rescore = 2;
  spec.rescore_episodes = 2;
  spec.seed = 9;
  const auto a = optimize_weights(kQuadratic, 10, spec);
  const auto b = optimize_weights(kQuadratic, 10, spec);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].weights == b.trace[i].weights);
  CHECK(a.best == b.best);
  spec.mode = SearchMode::kQuasiRandom;
  const auto q = optimize_weights(kQuadratic, 10, spec);
  CHECK(q.trace.size() == 15);
  CHECK(q.trace[12].point != a.trace[12].point);
}

TEST_CASE("constant objectives still return feasible weights") {
  SearchSpec spec;
  spec.iterations = 14;
  spec.episodes_per_eval = 3;
  spec.top_k_rescore = 3;
  spec.rescore_episodes = 3;
  const Objective flat = [](const WeightVector&, int n, std::uint64_t) { return constant_report(0.5, n); };
  const auto r = optimize_weights(flat, 25, spec);
  CHECK_NOTHROW(r.best.validate(25));
}

TEST_CASE("rescoring picks the fresh winner") {
  Candidate lucky;
  lucky.weights = {1, 0, 0, 1};
  lucky.mean_return = 0.9;
  Candidate solid;
  solid.weights = {0, 1, 0, 1};
  solid.mean_return = 0.8;
  // Fresh episodes reveal that w2-heavy weights are better.
  const Objective fresh = [](const WeightVector& w, int n, std::uint64_t) { return constant_report(w.w2, n); };
  const auto top = rescore_top_candidates({lucky, solid}, 2, 100, fresh, 1);
  CHECK(top.front().weights == solid.weights);
  CHECK(top.front().n_episodes == 100);
  const auto single = rescore_top_candidates({lucky, solid}, 1, 100, fresh, 1);
  CHECK(single.front().weights == lucky.weights);
  CHECK(single.front().mean_return == 0.9);
  CHECK_THROWS_AS(rescore_top_candidates({}, 1, 10, fresh, 1), ConfigError);
  CHECK_THROWS_AS(rescore_top_candidates({lucky}, 2, 10, fresh, 1), ConfigError);
}

TEST_CASE("training on a real domain beats nothing") {
  const BanditDomain d(2, 0.01);
  SearchSpec spec;
  spec.iterations = 4;
  spec.initial_points = 3;
  spec.episodes_per_eval = 50;
  spec.top_k_rescore = 2;
  spec.rescore_episodes = 50;
  const auto r = optimize_weights(d, spec);
  CHECK_NOTHROW(r.best.validate(25));
  CHECK(r.rescored.front().mean_return > 0.5);
  CHECK(training_seed(1) != rescore_seed(1));
  CHECK(rescore_seed(1) != test_seed(1));
}

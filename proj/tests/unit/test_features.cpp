#include <doctest.h>

#include <cmath>

#include "metareason/beta_math.hpp"
#include "metareason/features.hpp"
#include "oracles.hpp"

using namespace metareason;
using doctest::Approx;

namespace {

std::vector<int> as_ints(const TreeBelief& b) { return {b.values.begin(), b.values.end()}; }

TreeBelief random_tree(const TreeDomain& d, Rng& rng, int reveal_percent) {
  auto b = d.initial_belief();
  for (auto& v : b.values) {
    if (static_cast<int>(rng() % 100) < reveal_percent) v = rng() % 2 ? 1 : -1;
  }
  return b;
}

BanditBelief random_bandit(const BanditDomain& d, Rng& rng) {
  auto b = d.initial_belief();
  for (auto& arm : b.arms) arm = {1.0 + static_cast<double>(rng() % 12), 1.0 + static_cast<double>(rng() % 12)};
  return b;
}

}  // namespace

TEST_CASE("incomplete beta and closed forms") {
  CHECK(incomplete_beta(0.3, 1, 1) == Approx(0.3));
  CHECK(incomplete_beta(0.5, 2, 2) == Approx(0.5));
  CHECK(incomplete_beta(0.2, 2, 1) == Approx(0.04));
  CHECK_THROWS_AS(incomplete_beta(0.5, 0, 1), ConfigError);
  CHECK(expected_max_with_constant({1, 1}, 0.5) == Approx(0.625));
  CHECK(expected_max_symmetric({1, 1}) == Approx(0.75));
  const std::vector<BetaParams> two{{1, 1}, {1, 1}};
  CHECK(expected_max_of_betas(two) == Approx(2.0 / 3.0).epsilon(1e-9));
  const std::vector<double> cubic{0, 0.125, 1};
  CHECK(simpson(cubic, 0.5) == Approx(0.25));
}

TEST_CASE("stopping features") {
  const StoppingDomain prob(0.02, 30, StoppingScale::kProbability);
  const StoppingDomain sgn(0.02, 30, StoppingScale::kSigned);
  const StoppingBelief b0{1, 1};
  CHECK(voi1(prob, b0, 0) == Approx(1.0 / 6.0));
  CHECK(voi1(sgn, b0, 0) == Approx(1.0 / 3.0));
  CHECK(voi1(prob, StoppingBelief{2, 1}, 0) == Approx(0.0));
  CHECK(voi1(sgn, StoppingBelief{2, 1}, 0) == Approx(0.0));
  CHECK(vpi(sgn, b0) == Approx(0.5));
  CHECK(vpi(prob, b0) == Approx(0.25));
  CHECK(vpi_sub(sgn, StoppingBelief{4, 2}, 0) == vpi(sgn, StoppingBelief{4, 2}));
  const auto f = features(prob, b0, 0);
  CHECK(f.voi1 == Approx(1.0 / 6.0));
  CHECK(f.vpi == Approx(0.25));
  CHECK(f.vpi_sub == Approx(0.25));
  CHECK(f.cost == 0.02);
  CHECK_THROWS_AS(features(prob, b0, 1), InvalidActionError);
}

TEST_CASE("bandit features") {
  const BanditDomain d(2, 0.01);
  const auto b = d.initial_belief();
  const auto f = features(d, b, 0);
  CHECK(f.voi1 == Approx(1.0 / 12.0));
  CHECK(f.vpi == Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(f.vpi_sub == Approx(1.0 / 8.0));
  CHECK(f.cost == 0.01);
  const BanditDomain three(3, 0.0);
  BanditBelief sure{{{1000, 1}, {1, 1}, {1, 1}}, 0, false};
  CHECK(vpi(three, sure) < 0.01);
  CHECK(vpi(three, sure) >= 0.0);
  const auto all = features_all(d, b);
  REQUIRE(all.size() == 2);
  CHECK(all[1].vpi_sub == Approx(f.vpi_sub));
}

TEST_CASE("bandit VOI1 agrees with sampled transitions") {
  const BanditDomain d(3, 0.0);
  const BanditBelief b{{{3, 2}, {2, 2}, {1, 3}}, 0, false};
  for (int c = 0; c < 3; ++c) {
    const auto mc = voi1_monte_carlo(d, b, c, 1000000, 100 + static_cast<std::uint64_t>(c));
    CHECK(std::abs(mc.mean - voi1(d, b, c)) <= 3 * mc.se + 1e-12);
  }
}

TEST_CASE("bandit quadrature VPI agrees with Monte Carlo") {
  Rng rng(21);
  for (int k = 2; k <= 5; ++k) {
    const BanditDomain d(k, 0.0);
    for (int rep = 0; rep < 10; ++rep) {
      const auto b = random_bandit(d, rng);
      // 80 comparisons of rare-event estimators, so allow 4 SE and a small floor.
      const auto mc = vpi_monte_carlo(d, b, -1, 200000, rng());
      CHECK(std::abs(mc.mean - vpi(d, b)) <= 4 * mc.se + 1e-5);
      const auto mc_sub = vpi_monte_carlo(d, b, 0, 200000, rng());
      CHECK(std::abs(mc_sub.mean - vpi_sub(d, b, 0)) <= 4 * mc_sub.se + 1e-5);
    }
  }
}

TEST_CASE("tree VOI1 examples") {
  const TreeDomain d(2, 0.25);
  const auto b = d.initial_belief();
  CHECK(voi1(d, b, 3) == Approx(0.5));
  CHECK(voi1(d, b, 0) == Approx(0.0));
  const auto all = tree_voi1_all(b);
  CHECK(all[0] == 0.0);
  CHECK(all[6] == Approx(0.5));
}

TEST_CASE("tree VPI equals the exhaustive 128-case oracle") {
  const TreeDomain d(2, 0.0);
  const auto b = d.initial_belief();
  const std::vector<int> all_nodes{0, 1, 2, 3, 4, 5, 6};
  const double oracle_vpi = oracle::brute_partial_reveal(2, as_ints(b), all_nodes) - 0.0;
  CHECK(vpi(d, b) == Approx(oracle_vpi).epsilon(1e-12));
  // Leftmost leaf: only the leaf, its parent and the root are revealed (8 cases).
  const double oracle_sub = oracle::brute_partial_reveal(2, as_ints(b), {0, 1, 3});
  CHECK(vpi_sub(d, b, 3) == Approx(oracle_sub).epsilon(1e-12));
  // The root is relevant to every node, so its VPI_sub is the full VPI.
  CHECK(vpi_sub(d, b, 0) == Approx(vpi(d, b)));
}

TEST_CASE("tree features match brute force on random beliefs") {
  Rng rng(8);
  for (int h = 1; h <= 3; ++h) {
    const TreeDomain d(h, 0.0);
    for (int rep = 0; rep < 40; ++rep) {
      const auto b = random_tree(d, rng, 40);
      const auto values = as_ints(b);
      const double u = oracle::brute_max_path(h, values);
      std::vector<int> all(values.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      CHECK(vpi(d, b) == Approx(oracle::brute_partial_reveal(h, values, all) - u));
      const auto fs = features_all(d, b);
      for (int c = 0; c < d.num_nodes(); ++c) {
        std::vector<int> rel;
        for (int i = 0; i < d.num_nodes(); ++i) {
          if (d.relevant(c, i)) rel.push_back(i);
        }
        const double sub = oracle::brute_partial_reveal(h, values, rel) - u;
        CHECK(fs[static_cast<std::size_t>(c)].vpi_sub == Approx(sub));
        CHECK(fs[static_cast<std::size_t>(c)].voi1 == Approx(voi1(d, b, c)));
        CHECK(vpi_sub(d, b, c) == Approx(sub));
      }
    }
  }
}

TEST_CASE("tree Monte-Carlo features agree with the exact ones") {
  Rng rng(12);
  const TreeDomain d(4, 0.0);
  for (int rep = 0; rep < 5; ++rep) {
    const auto b = random_tree(d, rng, 30);
    const auto mc = vpi_monte_carlo(d, b, -1, 20000, rng());
    CHECK(std::abs(mc.mean - vpi(d, b)) <= 3 * mc.se + 1e-9);
    const auto mc_sub = vpi_monte_carlo(d, b, 9, 20000, rng());
    CHECK(std::abs(mc_sub.mean - vpi_sub(d, b, 9)) <= 3 * mc_sub.se + 1e-9);
  }
}

TEST_CASE("fully revealed tree has no information value") {
  const TreeDomain d(3, 0.1);
  Rng rng(4);
  const auto b = random_tree(d, rng, 100);
  CHECK(vpi(d, b) == 0.0);
  for (const auto& f : features_all(d, b)) {
    CHECK(f.voi1 == 0.0);
    CHECK(f.vpi_sub == 0.0);
    CHECK(f.cost == 0.1);
  }
}

TEST_CASE("tornado features") {
  const TornadoDomain d(3, 10);
  const auto b = d.initial_belief();
  for (int c = 0; c < 3; ++c) CHECK(voi1(d, b, c) == Approx(0.0));
  const auto fs = features_all(d, b);
  CHECK(fs[0].vpi == Approx(3 * fs[0].vpi_sub));
  CHECK(fs[0].vpi_sub > 0.0);
  const auto mc = vpi_monte_carlo(d, b, -1, 200000, 5);
  CHECK(std::abs(mc.mean - fs[0].vpi) <= 3 * mc.se + 1e-9);
  const TornadoBelief moved{{{1.1, 2.9}, {0.1, 3.9}, {0.1, 0.9}}, 4, 0, false};
  const auto mc_sub = vpi_monte_carlo(d, moved, 0, 200000, 6);
  CHECK(std::abs(mc_sub.mean - vpi_sub(d, moved, 0)) <= 3 * mc_sub.se + 1e-9);
}

TEST_CASE("feature ordering on random beliefs") {
  Rng rng(99);
  const BanditDomain bandit(4, 0.0);
  const TreeDomain tree(3, 0.0);
  const StoppingDomain stopping(0.0);
  const TornadoDomain tornado(4, 10);
  constexpr double kTol = 1e-9;
  for (int rep = 0; rep < 200; ++rep) {
    const auto bb = random_bandit(bandit, rng);
    for (const auto& f : features_all(bandit, bb)) {
      CHECK(f.voi1 >= 0.0);
      CHECK(f.voi1 <= f.vpi_sub + kTol);
      CHECK(f.vpi_sub <= f.vpi + kTol);
    }
    for (const auto& f : features_all(tree, random_tree(tree, rng, 40))) {
      CHECK(f.voi1 <= f.vpi_sub + kTol);
      CHECK(f.vpi_sub <= f.vpi + kTol);
    }
    const StoppingBelief sb{1.0 + static_cast<double>(rng() % 15), 1.0 + static_cast<double>(rng() % 15)};
    const auto sf = features_all(stopping, sb)[0];
    CHECK(sf.voi1 <= sf.vpi_sub + kTol);
    auto tb = tornado.initial_belief();
    for (auto& c : tb.cities) c = {0.1 + static_cast<double>(rng() % 5), 0.9 + static_cast<double>(rng() % 5)};
    for (const auto& f : features_all(tornado, tb)) {
      CHECK(f.voi1 <= f.vpi_sub + kTol);
      CHECK(f.vpi_sub <= f.vpi + kTol);
    }
  }
}

TEST_CASE("Monte-Carlo feature mode is deterministic and uses common random numbers") {
  FeatureConfig cfg;
  cfg.method = FeatureMethod::kMonteCarlo;
  cfg.mc_samples = 500;
  cfg.seed = 17;
  const BanditDomain d(3, 0.0);
  const BanditBelief b{{{2, 1}, {1, 1}, {1, 2}}, 0, false};
  const auto a = features_all(d, b, cfg);
  const auto again = features_all(d, b, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].vpi == again[i].vpi);
    CHECK(a[i].vpi_sub == again[i].vpi_sub);
  }
  CHECK(feature_seed(cfg, 5, 0) == feature_seed(cfg, 5, 2));
  cfg.common_random_numbers = false;
  CHECK(feature_seed(cfg, 5, 0) != feature_seed(cfg, 5, 2));
  cfg.mc_samples = 50;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

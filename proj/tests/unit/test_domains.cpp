#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "metareason/domains/bandit.hpp"
#include "metareason/domains/stopping.hpp"
#include "metareason/domains/tornado.hpp"
#include "metareason/domains/tree.hpp"
#include "oracles.hpp"

using namespace metareason;
using doctest::Approx;

TEST_CASE("stopping terminal reward on both scales") {
  CHECK(stopping_terminal({1, 1}) == Approx(0.0));
  CHECK(stopping_terminal({2, 1}) == Approx(1.0 / 3.0));
  CHECK(stopping_terminal({29, 1}) == Approx(14.0 / 15.0));
  CHECK(p_correct({1, 3}) == Approx(0.75));
  const StoppingDomain signed_domain(0.0);
  const StoppingDomain prob_domain(0.0, 30, StoppingScale::kProbability);
  CHECK(signed_domain.terminal_utility({2, 1}) == Approx(1.0 / 3.0));
  CHECK(prob_domain.terminal_utility({2, 1}) == Approx(2.0 / 3.0));
  CHECK(signed_domain.utility_given_theta(0.2) == Approx(0.6));
}

TEST_CASE("bandit terminal reward") {
  CHECK(bandit_terminal({{{1, 1}, {1, 1}}}) == 0.5);
  CHECK(bandit_terminal({{{3, 1}, {1, 2}}}) == Approx(0.75));
  const BanditDomain d(5, 0.0);
  CHECK(d.terminal_utility(d.initial_belief()) == 0.5);
  // Permutation invariance.
  CHECK(bandit_terminal({{{1, 2}, {3, 1}}}) == bandit_terminal({{{3, 1}, {1, 2}}}));
}

TEST_CASE("tree terminal reward examples") {
  const TreeDomain d(2, 0.0);
  auto b = d.initial_belief();
  CHECK(tree_terminal(b) == 0.0);
  b.values[5] = 1;
  CHECK(tree_terminal(b) == 1.0);
  b = d.initial_belief();
  b.values[0] = -1;
  CHECK(tree_terminal(b) == -1.0);
}

TEST_CASE("tree terminal reward matches path enumeration up to height 6") {
  Rng rng(3);
  for (int h = 1; h <= 6; ++h) {
    const TreeDomain d(h, 0.0);
    for (int rep = 0; rep < 50; ++rep) {
      auto b = d.initial_belief();
      std::vector<int> values(b.values.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = static_cast<int>(rng() % 3) - 1;
        b.values[i] = static_cast<std::int8_t>(values[i]);
      }
      CHECK(tree_terminal(b) == oracle::brute_max_path(h, values));
    }
  }
}

TEST_CASE("tree terminal is invariant under subtree swaps") {
  const TreeDomain d(2, 0.0);
  auto b = d.initial_belief();
  b.values = {0, 1, -1, 1, 0, -1, -1};
  auto swapped = b;
  swapped.values = {0, -1, 1, -1, -1, 1, 0};
  CHECK(tree_terminal(b) == tree_terminal(swapped));
  CHECK(d.canonical_key(b) == d.canonical_key(swapped));
  auto other = b;
  other.values[3] = -1;
  CHECK(!(d.canonical_key(b) == d.canonical_key(other)));
}

TEST_CASE("fully revealed tree equals the true best path") {
  const TreeDomain d(3, 0.0);
  Rng rng(5);
  auto b = d.initial_belief();
  for (int c = 0; c < d.num_nodes(); ++c) b = d.sample_successor(b, c, rng);
  CHECK(std::none_of(b.values.begin(), b.values.end(), [](auto v) { return v == 0; }));
  CHECK(d.terminal_utility(b) == d.utility_given_theta(b.values));
}

TEST_CASE("tornado terminal reward") {
  CHECK(tornado_terminal({{{0.1, 0.9}}}) == Approx(-1.0));
  CHECK(tornado_terminal({{{0.1, 2.9}}}) == Approx(-2.0 / 3.0));
  CHECK(tornado_terminal({{{0.1, 0.9}, {0.1, 0.9}}}) == Approx(-2.0));
  CHECK(evacuation_decisions({{{0.1, 0.9}, {0.1, 2.9}}}) == std::vector<bool>{true, false});
  // Additivity across disjoint sets of cities.
  const TornadoBelief a{{{1.1, 0.9}, {0.1, 3.9}}};
  const TornadoBelief b{{{0.1, 1.9}}};
  const TornadoBelief ab{{{1.1, 0.9}, {0.1, 3.9}, {0.1, 1.9}}};
  CHECK(tornado_terminal(ab) == Approx(tornado_terminal(a) + tornado_terminal(b)));
}

TEST_CASE("tornado tie keeps the city") {
  // mean * -20 == -1 exactly at mean 1/20.
  CHECK(evacuation_decisions({{{1, 19}}}) == std::vector<bool>{false});
}

TEST_CASE("tornado budget") {
  CHECK(tornado_budget({24, 0.5, 0.0}) == 48);
  CHECK(tornado_budget({24, 0.5, 0.001}) == 47);
  CHECK(tornado_budget({24, 16, 0.001}) == 1);
  CHECK(tornado_budget({24, 0.25, 0.0}) == 96);
  CHECK_THROWS_AS(tornado_budget({24, 0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(tornado_budget({0, 1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(tornado_budget({24, 1.0, -1.0}), ConfigError);
  const TornadoDomain d(10, 48);
  CHECK(d.spec().horizon == 49);
  CHECK(d.spec().cost == 0.0);
}

TEST_CASE("relevance functions") {
  const BanditDomain b(3, 0.0);
  CHECK(b.relevant(2, 2));
  CHECK(!b.relevant(2, 1));
  const TreeDomain t(2, 0.0);
  for (int i = 0; i < 7; ++i) CHECK(t.relevant(0, i));
  std::vector<int> relevant_to_leaf;
  for (int i = 0; i < 7; ++i) {
    if (t.relevant(3, i)) relevant_to_leaf.push_back(i);
  }
  CHECK(relevant_to_leaf == std::vector<int>{0, 1, 3});
  const StoppingDomain s(0.0);
  CHECK(s.relevant(0, 0));
  const TornadoDomain td(3, 1);
  CHECK(td.relevant(1, 1));
  CHECK(!td.relevant(1, 0));
}

TEST_CASE("tree layout helpers") {
  CHECK(tree_layout::node_count(2) == 7);
  CHECK(tree_layout::node_count(6) == 127);
  CHECK(tree_layout::depth(0) == 0);
  CHECK(tree_layout::depth(6) == 2);
  CHECK(tree_layout::is_ancestor(0, 5));
  CHECK(tree_layout::is_ancestor(2, 5));
  CHECK(!tree_layout::is_ancestor(1, 5));
  CHECK(!tree_layout::is_ancestor(5, 5));
}

TEST_CASE("canonical keys") {
  const BanditDomain d(3, 0.0);
  BanditBelief a{{{2, 1}, {1, 1}, {1, 3}}, 4, false};
  BanditBelief b{{{1, 3}, {2, 1}, {1, 1}}, 4, false};
  CHECK(d.canonical_key(a) == d.canonical_key(b));
  b.step = 5;
  CHECK(!(d.canonical_key(a) == d.canonical_key(b)));
  CHECK(d.describe_key(d.canonical_key(a)).find("r=20") != std::string::npos);

  const StoppingDomain s(0.0);
  CHECK(s.describe_key(s.canonical_key({3, 4, 5, false})) == "3:4|r=24");

  const TreeDomain t(6, 0.0);
  CHECK_THROWS_AS(t.canonical_key(t.initial_belief()), ResourceLimitError);
  const TreeDomain t2(2, 0.0);
  CHECK(t2.canonical_state_count() == Approx(513));
  CHECK(TreeDomain(3, 0.0).canonical_state_count() == Approx(395523));
  // A binding horizon puts the remaining budget into the key.
  const TreeDomain short_tree(2, 0.0, 3);
  auto early = short_tree.initial_belief();
  auto late = early;
  late.step = 1;
  CHECK(!(short_tree.canonical_key(early) == short_tree.canonical_key(late)));
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(StoppingDomain(-0.1), ConfigError);
  CHECK_THROWS_AS(BanditDomain(2, 0.01, 0), ConfigError);
  CHECK_THROWS_AS(TreeDomain(0, 0.01), ConfigError);
  CHECK_THROWS_AS(TornadoDomain(2, -1), ConfigError);
  const BanditDomain d(2, 0.0);
  CHECK_THROWS_AS(d.validate(BanditBelief{{{1, 1}}, 0, false}), ConstraintError);
  CHECK_THROWS_AS(d.validate(BanditBelief{{{0, 1}, {1, 1}}, 0, false}), ConstraintError);
  const TreeDomain t(2, 0.0);
  auto bad = t.initial_belief();
  bad.values.pop_back();
  CHECK_THROWS_AS(t.validate(bad), ConstraintError);
}

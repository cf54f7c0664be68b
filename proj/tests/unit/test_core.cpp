#include <doctest.h>

#include <cmath>
#include <map>

#include "metareason/domains/bandit.hpp"
#include "metareason/domains/stopping.hpp"
#include "metareason/domains/tornado.hpp"
#include "metareason/domains/tree.hpp"
#include "metareason/episode.hpp"
#include "metareason/policies.hpp"

using namespace metareason;
using doctest::Approx;

TEST_CASE("meta action basics") {
  CHECK(MetaAction::terminate().is_terminate());
  CHECK(MetaAction::compute(3).index() == 3);
  CHECK(MetaAction::compute(0) != MetaAction::terminate());
  CHECK(MetaAction::compute(2).to_string() == "compute(2)");
  CHECK_THROWS_AS(MetaAction::compute(-1), InvalidActionError);
}

TEST_CASE("stopping transition from the uniform prior") {
  const StoppingDomain d(0.05, 30, StoppingScale::kProbability);
  const auto succ = enumerate_successors(d, d.initial_belief(), MetaAction::compute(0));
  REQUIRE(succ.size() == 2);
  CHECK(succ[0].belief.alpha == 2.0);
  CHECK(succ[0].probability == Approx(0.5));
  CHECK(succ[1].belief.beta == 2.0);
  CHECK(succ[1].probability == Approx(0.5));
  CHECK(succ[0].belief.step == 1);

  Rng rng(1);
  auto [next, reward] = sample_transition(d, d.initial_belief(), MetaAction::compute(0), rng);
  CHECK(reward == -0.05);
  CHECK(next.alpha + next.beta == 3.0);
  CHECK(next.step == 1);

  auto [done, final_reward] = sample_transition(d, d.initial_belief(), MetaAction::terminate(), rng);
  CHECK(final_reward == Approx(0.5));
  CHECK(done.terminated);
  CHECK_THROWS_AS(sample_transition(d, done, MetaAction::terminate(), rng), LifecycleError);
}

TEST_CASE("sample_transition rejects bad actions") {
  const BanditDomain d(2, 0.01);
  Rng rng(0);
  CHECK_THROWS_AS(sample_transition(d, d.initial_belief(), MetaAction::compute(2), rng), InvalidActionError);
  CHECK_THROWS_AS(enumerate_successors(d, d.initial_belief(), MetaAction::terminate()), InvalidActionError);
  auto last = d.initial_belief();
  last.step = d.spec().horizon - 1;
  CHECK_THROWS_AS(sample_transition(d, last, MetaAction::compute(0), rng), InvalidActionError);
}

TEST_CASE("tree leaf computation reveals +-1 with equal odds") {
  const TreeDomain d(2, 0.1);
  const auto succ = enumerate_successors(d, d.initial_belief(), MetaAction::compute(4));
  REQUIRE(succ.size() == 2);
  CHECK(succ[0].belief.values[4] == 1);
  CHECK(succ[1].belief.values[4] == -1);
  CHECK(succ[0].probability == 0.5);
  // Revealed nodes do not move.
  const auto again = enumerate_successors(d, succ[0].belief, MetaAction::compute(4));
  REQUIRE(again.size() == 1);
  CHECK(again[0].probability == 1.0);
  CHECK(again[0].belief.values == succ[0].belief.values);
}

TEST_CASE("bandit successors follow the posterior predictive") {
  const BanditDomain d(2, 0.01);
  auto b = d.initial_belief();
  auto succ = enumerate_successors(d, b, MetaAction::compute(0));
  CHECK(succ[0].belief.arms[0] == BetaParams{2, 1});
  CHECK(succ[1].belief.arms[0] == BetaParams{1, 2});
  CHECK(succ[0].probability == 0.5);
  b.arms[0] = {3, 1};
  succ = enumerate_successors(d, b, MetaAction::compute(0));
  CHECK(succ[0].belief.arms[0] == BetaParams{4, 1});
  CHECK(succ[0].probability == Approx(0.75));
  CHECK(succ[1].belief.arms[0] == BetaParams{3, 2});
  CHECK(succ[1].probability == Approx(0.25));
  CHECK(succ[0].belief.arms[1] == BetaParams{1, 1});
}

TEST_CASE("termination utility examples") {
  const StoppingDomain s(0.0, 30, StoppingScale::kProbability);
  CHECK(termination_utility(s, StoppingBelief{2, 1}) == Approx(2.0 / 3.0));
  const BanditDomain b(3, 0.0);
  CHECK(termination_utility(b, b.initial_belief()) == 0.5);
  const TornadoDomain t(1, 0);
  CHECK(termination_utility(t, t.initial_belief()) == Approx(-1.0));
}

namespace {

template <class D>
void check_normalization(const D& d, const typename D::Belief& b) {
  for (int c = 0; c < d.spec().num_computations; ++c) {
    double total = 0.0;
    double expected_u = 0.0;
    for (const auto& o : enumerate_successors(d, b, MetaAction::compute(c))) {
      total += o.probability;
      expected_u += o.probability * d.terminal_utility(o.belief);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
    // The expected terminal utility never drops after a computation.
    CHECK(expected_u >= d.terminal_utility(b) - 1e-12);
  }
}

}  // namespace

TEST_CASE("successor probabilities are normalized on random beliefs") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const StoppingDomain s(0.01);
    check_normalization(s, StoppingBelief{1.0 + static_cast<double>(rng() % 20), 1.0 + static_cast<double>(rng() % 20)});
    const BanditDomain b(4, 0.01);
    auto bb = b.initial_belief();
    for (auto& arm : bb.arms) arm = {1.0 + static_cast<double>(rng() % 9), 1.0 + static_cast<double>(rng() % 9)};
    check_normalization(b, bb);
    const TreeDomain t(3, 0.01);
    auto tb = t.initial_belief();
    for (auto& v : tb.values) v = static_cast<std::int8_t>(static_cast<int>(rng() % 3) - 1);
    check_normalization(t, tb);
    const TornadoDomain td(3, 5);
    auto db = td.initial_belief();
    for (auto& city : db.cities) city = {0.1 + static_cast<double>(rng() % 4), 0.9 + static_cast<double>(rng() % 4)};
    check_normalization(td, db);
  }
}

TEST_CASE("sampled transitions match the enumerated distribution") {
  const BanditDomain d(2, 0.0);
  auto b = d.initial_belief();
  b.arms[0] = {3, 1};
  Rng rng(11);
  const int draws = 100000;
  int up = 0;
  for (int i = 0; i < draws; ++i) up += d.sample_successor(b, 0, rng).arms[0].alpha == 4.0;
  const double p = 0.75;
  const double se = std::sqrt(p * (1 - p) / draws);
  CHECK(std::abs(up / static_cast<double>(draws) - p) < 3 * se);

  const TreeDomain t(2, 0.0);
  int plus = 0;
  for (int i = 0; i < draws; ++i) plus += t.sample_successor(t.initial_belief(), 3, rng).values[3] == 1;
  CHECK(std::abs(plus / static_cast<double>(draws) - 0.5) < 3 * std::sqrt(0.25 / draws));
}

TEST_CASE("run_episode traces") {
  const BanditDomain d(3, 0.001);
  const auto trace = run_episode(d, d.initial_belief(), make_full_policy(d), 42);
  CHECK(trace.actions.size() == 25);
  CHECK(trace.actions.back().is_terminate());
  for (std::size_t i = 0; i + 1 < trace.actions.size(); ++i) CHECK(trace.actions[i].is_compute());
  double sum = 0.0;
  for (double r : trace.rewards) sum += r;
  CHECK(sum == trace.return_total);
  CHECK(trace.final_belief.terminated);

  const auto again = run_episode(d, d.initial_belief(), make_full_policy(d), 42);
  CHECK(again.return_total == trace.return_total);
  CHECK(again.actions == trace.actions);
  CHECK(episode_return(d, d.initial_belief(), make_full_policy(d), 42) == trace.return_total);

  const StoppingDomain s(0.2, 30, StoppingScale::kProbability);
  const auto stop = run_episode(s, s.initial_belief(), make_terminate_policy<StoppingBelief>(), 1);
  CHECK(stop.actions.size() == 1);
  CHECK(stop.return_total == Approx(0.5));
  const auto greedy = run_episode(s, s.initial_belief(), make_meta_greedy_policy(s), 1);
  CHECK(greedy.actions.size() == 1);
  CHECK(greedy.return_total == Approx(0.5));
}

TEST_CASE("policy errors propagate from the runner") {
  const BanditDomain d(2, 0.0);
  const Policy<BanditBelief> bad = [](const BanditBelief&) { return MetaAction::compute(5); };
  CHECK_THROWS_AS(run_episode(d, d.initial_belief(), bad, 0), InvalidActionError);
}

TEST_CASE("evaluate_policy summary statistics") {
  const BanditDomain d(2, 0.01);
  const auto r = evaluate_policy(d, d.initial_belief(), make_terminate_policy<BanditBelief>(), 50, 9);
  CHECK(r.mean == 0.5);
  CHECK(r.sd == 0.0);
  CHECK(r.ci_lo == r.ci_hi);
  CHECK(r.n == 50);
  CHECK(r.returns.size() == 50);
  CHECK_THROWS_AS(evaluate_policy(d, d.initial_belief(), make_terminate_policy<BanditBelief>(), 0, 9), ConfigError);

  const std::vector<double> xs{1, 2, 3, 4};
  const auto s = summarize(xs, 3);
  CHECK(s.mean == 2.5);
  CHECK(s.sd == Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.half_width() == Approx(kZ95 * s.sd / 2.0));

  const std::vector<double> a{1, 2, 3}, b{0, 1, 2};
  const auto diff = compare_paired(a, b);
  CHECK(diff.mean_diff == 1.0);
  CHECK(diff.ci_lo == 1.0);
  CHECK(diff.n == 3);
}

TEST_CASE("evaluation is reproducible and uses consecutive seeds") {
  const BanditDomain d(2, 0.01);
  const auto pi = make_full_policy(d);
  const auto a = evaluate_policy(d, d.initial_belief(), pi, 20, 100);
  const auto b = evaluate_policy(d, d.initial_belief(), pi, 20, 100);
  CHECK(a.returns == b.returns);
  CHECK(a.returns[3] == episode_return(d, d.initial_belief(), pi, 103));
}

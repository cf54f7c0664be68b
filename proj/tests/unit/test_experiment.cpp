#include <doctest.h>

#include "metareason/experiment.hpp"

using namespace metareason;
using doctest::Approx;

TEST_CASE("names round-trip") {
  for (auto k : {DomainKind::kStopping, DomainKind::kBandit, DomainKind::kTree, DomainKind::kTornado}) {
    CHECK(parse_domain(domain_name(k)) == k);
  }
  for (const char* name : {"bmps", "meta_greedy", "full", "uniform", "blinkered", "recursive_blinkered", "optimal"}) {
    CHECK(policy_name(parse_policy(name)) == name);
  }
  CHECK_THROWS_AS(parse_policy("dqn"), ConfigError);
  CHECK_THROWS_AS(parse_domain("chess"), ConfigError);
}

TEST_CASE("cell evaluation") {
  CellSpec cell{DomainKind::kBandit, 3, 0.01};
  const auto r = evaluate_cell(cell, PolicyKind::kTerminate, {}, 100, 1);
  CHECK(r.mean == 0.5);
  CHECK(r.half_width() == 0.0);
  CHECK(cell_horizon(cell) == 25);
  CHECK_THROWS_AS(evaluate_cell(cell, PolicyKind::kUniform, {}, 10, 1), ConfigError);
  CHECK_THROWS_AS(evaluate_cell(cell, PolicyKind::kRecursiveBlinkered, {}, 10, 1), ConfigError);
  const CellSpec tornado{DomainKind::kTornado, 3, 0.0, 0, 5};
  CHECK_THROWS_AS(evaluate_cell(tornado, PolicyKind::kOptimal, {}, 10, 1), ConfigError);
  CHECK_NOTHROW(evaluate_cell(tornado, PolicyKind::kUniform, {}, 10, 1));
}

TEST_CASE("tree reports are normalised by height") {
  const CellSpec tree{DomainKind::kTree, 2, 0.125};
  CHECK(report_scale(tree) == 2.0);
  const auto raw = evaluate_cell(tree, PolicyKind::kOptimal, {}, 200, 4);
  const auto scaled = scale_report(raw, report_scale(tree));
  CHECK(scaled.mean == Approx(raw.mean / 2));
  CHECK(scaled.returns[0] == Approx(raw.returns[0] / 2));
  CHECK(optimal_value(tree) > 0.0);
  CHECK_THROWS_AS(optimal_value(CellSpec{DomainKind::kTree, 6, 0.1}), ResourceLimitError);
}

TEST_CASE("tornado cell bookkeeping") {
  const auto r = run_tornado_cell(3, 8.0, 24.0, 0.0005, {0.2, 0.3, 0.5, 2}, 50, 1);
  CHECK(r.n_sim_uniform == 3);
  CHECK(r.n_sim_bmps == 2);
  CHECK(r.n_sim_uniform >= r.n_sim_bmps);
  CHECK(r.bmps.n == 50);
  CHECK(r.advantage.n == 50);
  const double hours = measure_metareasoning_hours(10, 20, {0.2, 0.3, 0.5, 2}, 20);
  CHECK(hours > 0.0);
  CHECK(hours < 0.001);
}

#include <benchmark/benchmark.h>

#include "metareason/domains/bandit.hpp"
#include "metareason/domains/stopping.hpp"
#include "metareason/domains/tornado.hpp"
#include "metareason/domains/tree.hpp"
#include "metareason/features.hpp"

namespace mr = metareason;

namespace {

// Walk a few steps in so beliefs are not the symmetric prior.
template <class D>
typename D::Belief warm_belief(const D& domain, int steps) {
  mr::Rng rng(11);
  auto belief = domain.initial_belief();
  for (int s = 0; s < steps; ++s) {
    const int c = s % domain.spec().num_computations;
    if (!domain.is_informative(belief, c)) continue;
    belief = domain.sample_successor(belief, c, rng);
  }
  return belief;
}

void BM_StoppingFeatures(benchmark::State& state) {
  const mr::StoppingDomain domain(0.01);
  const auto belief = warm_belief(domain, 5);
  for (auto _ : state) benchmark::DoNotOptimize(mr::features_all(domain, belief));
}
BENCHMARK(BM_StoppingFeatures);

void BM_BanditFeatures(benchmark::State& state) {
  const mr::BanditDomain domain(static_cast<int>(state.range(0)), 0.001);
  const auto belief = warm_belief(domain, 6);
  for (auto _ : state) benchmark::DoNotOptimize(mr::features_all(domain, belief));
}
BENCHMARK(BM_BanditFeatures)->DenseRange(2, 5);

void BM_TreeFeatures(benchmark::State& state) {
  const mr::TreeDomain domain(static_cast<int>(state.range(0)), 0.01);
  const auto belief = warm_belief(domain, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mr::features_all(domain, belief));
}
BENCHMARK(BM_TreeFeatures)->DenseRange(2, 6);

void BM_TreeVoi1All(benchmark::State& state) {
  const mr::TreeDomain domain(static_cast<int>(state.range(0)), 0.01);
  const auto belief = warm_belief(domain, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mr::tree_voi1_all(belief));
}
BENCHMARK(BM_TreeVoi1All)->DenseRange(2, 6);

void BM_TornadoFeatures(benchmark::State& state) {
  const mr::TornadoDomain domain(static_cast<int>(state.range(0)), 50);
  const auto belief = warm_belief(domain, 10);
  for (auto _ : state) benchmark::DoNotOptimize(mr::features_all(domain, belief));
}
BENCHMARK(BM_TornadoFeatures)->Arg(10)->Arg(20)->Arg(30);

void BM_BanditVpiMonteCarlo(benchmark::State& state) {
  const mr::BanditDomain domain(4, 0.001);
  const auto belief = warm_belief(domain, 6);
  const int samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mr::vpi_monte_carlo(domain, belief, -1, samples, 3));
}
BENCHMARK(BM_BanditVpiMonteCarlo)->Arg(1000)->Arg(10000);

}  // namespace

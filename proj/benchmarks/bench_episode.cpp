#include <benchmark/benchmark.h>

#include "metareason/domains/bandit.hpp"
#include "metareason/domains/stopping.hpp"
#include "metareason/domains/tree.hpp"
#include "metareason/episode.hpp"
#include "metareason/policies.hpp"

namespace mr = metareason;

namespace {

const mr::WeightVector kWeights{0.4, 0.3, 0.3, 1.0};

template <class D>
void run_bmps(benchmark::State& state, const D& domain) {
  const auto policy = mr::make_bmps_policy(domain, kWeights);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mr::episode_return(domain, domain.initial_belief(), policy, ++seed));
}

void BM_EpisodeStopping(benchmark::State& state) { run_bmps(state, mr::StoppingDomain(0.01)); }
BENCHMARK(BM_EpisodeStopping);

void BM_EpisodeBandit(benchmark::State& state) {
  run_bmps(state, mr::BanditDomain(static_cast<int>(state.range(0)), 0.001));
}
BENCHMARK(BM_EpisodeBandit)->DenseRange(2, 5);

void BM_EpisodeTree(benchmark::State& state) {
  run_bmps(state, mr::TreeDomain(static_cast<int>(state.range(0)), 0.01));
}
BENCHMARK(BM_EpisodeTree)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

}  // namespace

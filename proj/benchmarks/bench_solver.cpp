#include <benchmark/benchmark.h>

#include "metareason/domains/bandit.hpp"
#include "metareason/domains/stopping.hpp"
#include "metareason/domains/tree.hpp"
#include "metareason/exact_solver.hpp"

namespace mr = metareason;

namespace {

// Each iteration solves from an empty table.
template <class D>
void solve_fresh(benchmark::State& state, const D& domain) {
  std::size_t states = 0;
  for (auto _ : state) {
    mr::ExactSolver<D> solver(domain);
    benchmark::DoNotOptimize(solver.solve(domain.initial_belief()));
    states = solver.size();
  }
  state.counters["states"] = static_cast<double>(states);
}

void BM_SolveStopping(benchmark::State& state) {
  solve_fresh(state, mr::StoppingDomain(0.01, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SolveStopping)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_SolveBandit(benchmark::State& state) {
  solve_fresh(state, mr::BanditDomain(static_cast<int>(state.range(0)), 0.001));
}
BENCHMARK(BM_SolveBandit)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_SolveTree(benchmark::State& state) { solve_fresh(state, mr::TreeDomain(2, 0.01)); }
BENCHMARK(BM_SolveTree)->Unit(benchmark::kMillisecond);

}  // namespace

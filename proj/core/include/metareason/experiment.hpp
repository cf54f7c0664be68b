#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metareason/domains/bandit.hpp"
#include "metareason/domains/stopping.hpp"
#include "metareason/domains/tornado.hpp"
#include "metareason/domains/tree.hpp"
#include "metareason/episode.hpp"
#include "metareason/exact_solver.hpp"
#include "metareason/features.hpp"
#include "metareason/optimizer.hpp"
#include "metareason/policies.hpp"

namespace metareason {

enum class DomainKind { kStopping, kBandit, kTree, kTornado };
enum class PolicyKind { kBmps, kMetaGreedy, kFull, kUniform, kBlinkered, kRecursiveBlinkered, kOptimal, kTerminate };

DomainKind parse_domain(std::string_view name);
std::string domain_name(DomainKind kind);
PolicyKind parse_policy(std::string_view name);
std::string policy_name(PolicyKind kind);

/// One experiment cell. `size` is the arm count, tree height or city count
/// (ignored for stopping); horizon 0 selects the domain default; `budget` is
/// the tornado simulation budget.
struct CellSpec {
  DomainKind domain = DomainKind::kBandit;
  int size = 2;
  double cost = 0.0;
  int horizon = 0;
  int budget = 0;
  StoppingScale stopping_scale = StoppingScale::kSigned;
};

using AnyDomain = std::variant<StoppingDomain, BanditDomain, TreeDomain, TornadoDomain>;

AnyDomain make_domain(const CellSpec& cell);
int cell_horizon(const CellSpec& cell);
/// Divisor applied to reported returns (tree height for trees, else 1).
double report_scale(const CellSpec& cell);
EvalReport scale_report(const EvalReport& report, double divisor);

struct PolicyOptions {
  WeightVector weights;
  FeatureConfig features;
  std::size_t state_cap = kDefaultStateCap;
};

/// Episode returns of one policy on one cell, seeds base_seed + i.
EvalReport evaluate_cell(const CellSpec& cell, PolicyKind policy, const PolicyOptions& options, int episodes,
                         std::uint64_t base_seed);

/// V*(b0) of a cell by backward induction.
double optimal_value(const CellSpec& cell, std::size_t state_cap = kDefaultStateCap);

/// Bayesian-optimisation training of the BMPS weights on a cell.
SearchResult train_cell(const CellSpec& cell, const SearchSpec& spec, const FeatureConfig& features = {});

struct TornadoCellResult {
  int cities = 0;
  double sim_duration = 0.0;
  double metareason_duration = 0.0;  // hours per BMPS decision
  int n_sim_bmps = 0;
  int n_sim_uniform = 0;
  EvalReport bmps;
  EvalReport uniform;
  PairedComparison advantage;  // bmps - uniform
};

/// BMPS against uniform allocation. Uniform is charged no metareasoning time.
TornadoCellResult run_tornado_cell(int cities, double sim_duration, double total_time, double metareason_duration,
                                   const WeightVector& weights, int rollouts, std::uint64_t base_seed,
                                   const FeatureConfig& features = {});

/// Median wall-clock time of one bmps_act call in hours (warm calls).
double measure_metareasoning_hours(int cities, int budget, const WeightVector& weights, int calls = 100,
                                   const FeatureConfig& features = {});

}  // namespace metareason

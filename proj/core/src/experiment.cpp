#include "metareason/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <type_traits>

namespace metareason {

namespace {

struct NamedDomain {
  DomainKind kind;
  const char* name;
};
constexpr NamedDomain kDomains[] = {{DomainKind::kStopping, "stopping"},
                                    {DomainKind::kBandit, "bandit"},
                                    {DomainKind::kTree, "tree"},
                                    {DomainKind::kTornado, "tornado"}};

struct NamedPolicy {
  PolicyKind kind;
  const char* name;
};
constexpr NamedPolicy kPolicies[] = {{PolicyKind::kBmps, "bmps"},
                                     {PolicyKind::kMetaGreedy, "meta_greedy"},
                                     {PolicyKind::kFull, "full"},
                                     {PolicyKind::kUniform, "uniform"},
                                     {PolicyKind::kBlinkered, "blinkered"},
                                     {PolicyKind::kRecursiveBlinkered, "recursive_blinkered"},
                                     {PolicyKind::kOptimal, "optimal"},
                                     {PolicyKind::kTerminate, "terminate"}};

[[noreturn]] void unsupported(PolicyKind policy, DomainKind domain) {
  throw ConfigError("policy '" + policy_name(policy) + "' is not available for domain '" + domain_name(domain) + "'");
}

template <class D>
Policy<typename D::Belief> build_policy(const D& domain, DomainKind kind, PolicyKind policy,
                                        const PolicyOptions& options) {
  using B = typename D::Belief;
  switch (policy) {
    case PolicyKind::kBmps:
      return make_bmps_policy(domain, options.weights, options.features);
    case PolicyKind::kMetaGreedy:
      return make_meta_greedy_policy(domain);
    case PolicyKind::kFull:
      return make_full_policy(domain);
    case PolicyKind::kTerminate:
      return make_terminate_policy<B>();
    case PolicyKind::kOptimal:
      if constexpr (std::is_same_v<D, TornadoDomain>) {
        unsupported(policy, kind);
      } else {
        return make_optimal_policy(std::make_shared<ExactSolver<D>>(domain, options.state_cap));
      }
    case PolicyKind::kUniform:
      if constexpr (std::is_same_v<D, TornadoDomain>) return make_uniform_policy(domain);
      unsupported(policy, kind);
    case PolicyKind::kBlinkered:
      if constexpr (std::is_same_v<D, BanditDomain>) return make_blinkered_policy(domain);
      unsupported(policy, kind);
    case PolicyKind::kRecursiveBlinkered:
      if constexpr (std::is_same_v<D, TreeDomain>) return make_recursively_blinkered_policy(domain);
      unsupported(policy, kind);
  }
  unsupported(policy, kind);
}

}  // namespace

DomainKind parse_domain(std::string_view name) {
  for (const auto& d : kDomains) {
    if (name == d.name) return d.kind;
  }
  throw ConfigError("unknown domain '" + std::string(name) + "'");
}

std::string domain_name(DomainKind kind) {
  for (const auto& d : kDomains) {
    if (d.kind == kind) return d.name;
  }
  return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
  for (const auto& p : kPolicies) {
    if (name == p.name) return p.kind;
  }
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::string policy_name(PolicyKind kind) {
  for (const auto& p : kPolicies) {
    if (p.kind == kind) return p.name;
  }
  return "unknown";
}

AnyDomain make_domain(const CellSpec& cell) {
  switch (cell.domain) {
    case DomainKind::kStopping:
      return StoppingDomain(cell.cost, cell.horizon > 0 ? cell.horizon : 30, cell.stopping_scale);
    case DomainKind::kBandit:
      if (cell.size < 1) throw ConfigError("bandit needs at least one arm");
      return BanditDomain(cell.size, cell.cost, cell.horizon > 0 ? cell.horizon : 25);
    case DomainKind::kTree:
      return TreeDomain(cell.size, cell.cost, cell.horizon);
    case DomainKind::kTornado:
      if (cell.size < 1) throw ConfigError("tornado needs at least one city");
      return TornadoDomain(cell.size, cell.budget);
  }
  throw ConfigError("unknown domain kind");
}

int cell_horizon(const CellSpec& cell) {
  return std::visit([](const auto& d) { return d.spec().horizon; }, make_domain(cell));
}

double report_scale(const CellSpec& cell) { return cell.domain == DomainKind::kTree ? cell.size : 1.0; }

EvalReport scale_report(const EvalReport& report, double divisor) {
  EvalReport out = report;
  out.mean /= divisor;
  out.sd /= divisor;
  out.ci_lo /= divisor;
  out.ci_hi /= divisor;
  for (double& r : out.returns) r /= divisor;
  return out;
}

EvalReport evaluate_cell(const CellSpec& cell, PolicyKind policy, const PolicyOptions& options, int episodes,
                         std::uint64_t base_seed) {
  return std::visit(
      [&](const auto& domain) {
        const auto pi = build_policy(domain, cell.domain, policy, options);
        return evaluate_policy(domain, domain.initial_belief(), pi, episodes, base_seed);
      },
      make_domain(cell));
}

double optimal_value(const CellSpec& cell, std::size_t state_cap) {
  return std::visit(
      [&](const auto& domain) -> double {
        using D = std::decay_t<decltype(domain)>;
        if constexpr (std::is_same_v<D, TornadoDomain>) {
          unsupported(PolicyKind::kOptimal, cell.domain);
        } else {
          ExactSolver<D> solver(domain, state_cap);
          return solver.solve(domain.initial_belief());
        }
      },
      make_domain(cell));
}

SearchResult train_cell(const CellSpec& cell, const SearchSpec& spec, const FeatureConfig& features) {
  return std::visit([&](const auto& domain) { return optimize_weights(domain, spec, features); }, make_domain(cell));
}

TornadoCellResult run_tornado_cell(int cities, double sim_duration, double total_time, double metareason_duration,
                                   const WeightVector& weights, int rollouts, std::uint64_t base_seed,
                                   const FeatureConfig& features) {
  TornadoCellResult r;
  r.cities = cities;
  r.sim_duration = sim_duration;
  r.metareason_duration = metareason_duration;
  r.n_sim_bmps = tornado_budget({total_time, sim_duration, metareason_duration});
  r.n_sim_uniform = tornado_budget({total_time, sim_duration, 0.0});
  const TornadoDomain bmps_domain(cities, r.n_sim_bmps);
  const TornadoDomain uniform_domain(cities, r.n_sim_uniform);
  // Weights were trained for another budget; clamp w4 into this horizon's range.
  WeightVector w = weights;
  w.w4 = std::clamp(w.w4, 1.0, static_cast<double>(bmps_domain.spec().horizon));
  r.bmps = evaluate_policy(bmps_domain, bmps_domain.initial_belief(), make_bmps_policy(bmps_domain, w, features),
                           rollouts, base_seed);
  r.uniform = evaluate_policy(uniform_domain, uniform_domain.initial_belief(), make_uniform_policy(uniform_domain),
                              rollouts, base_seed);
  r.advantage = compare_paired(r.bmps.returns, r.uniform.returns);
  return r;
}

double measure_metareasoning_hours(int cities, int budget, const WeightVector& weights, int calls,
                                   const FeatureConfig& features) {
  if (calls < 1) throw ConfigError("calls must be positive");
  const TornadoDomain domain(cities, std::max(budget, 1));
  WeightVector w = weights;
  w.w4 = std::clamp(w.w4, 1.0, static_cast<double>(domain.spec().horizon));
  const auto belief = domain.initial_belief();
  volatile int sink = 0;
  for (int i = 0; i < 10; ++i) sink = sink + bmps_act(domain, belief, w, features).index();
  std::vector<double> seconds;
  seconds.reserve(static_cast<std::size_t>(calls));
  for (int i = 0; i < calls; ++i) {
    const auto start = std::chrono::steady_clock::now();
    sink = sink + bmps_act(domain, belief, w, features).index();
    seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::nth_element(seconds.begin(), seconds.begin() + calls / 2, seconds.end());
  return seconds[static_cast<std::size_t>(calls / 2)] / 3600.0;
}

}  // namespace metareason

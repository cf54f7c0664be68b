#pragma once

#include <cstdio>
#include <memory>
#include <ostream>
#include <string>

#include <absl/container/flat_hash_map.h>

#include "metareason/episode.hpp"
#include "metareason/policies.hpp"

namespace metareason {

inline constexpr std::size_t kDefaultStateCap = 5'000'000;

template <class D>
concept CanonicalMetaMdp = MetaMdp<D> && requires(const D& d, const typename D::Belief& b, const BeliefKey& k) {
  { d.canonical_key(b) } -> std::same_as<BeliefKey>;
  { d.describe_key(k) } -> std::convertible_to<std::string>;
};

/// Hash of the metalevel MDP parameters, written into exported tables.
inline std::uint64_t spec_hash(const MetaMdpSpec& spec) {
  return StableHasher{}
      .add(spec.cost)
      .add(static_cast<std::uint64_t>(spec.horizon))
      .add(static_cast<std::uint64_t>(spec.num_computations))
      .digest();
}

/// Memoized backward induction over the beliefs reachable from the ones it is
/// asked about. V*(b) = max(U(b), max_c Q*(b, c)); the table is keyed by the
/// domain's canonical key, which already folds in the remaining step budget.
/// Not thread-safe: give each evaluation thread its own solver.
template <CanonicalMetaMdp D>
class ExactSolver {
 public:
  using Belief = typename D::Belief;

  explicit ExactSolver(D domain, std::size_t state_cap = kDefaultStateCap)
      : domain_(std::move(domain)), state_cap_(state_cap) {
    if constexpr (requires { domain_.canonical_state_count(); }) {
      if (domain_.canonical_state_count() > static_cast<double>(state_cap_)) {
        char count[32];
        std::snprintf(count, sizeof count, "%.3g", domain_.canonical_state_count());
        throw ResourceLimitError(std::string("belief space of ~") + count + " states exceeds the cap of " +
                                 std::to_string(state_cap_));
      }
    }
  }

  const D& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return table_.size(); }
  std::size_t state_cap() const noexcept { return state_cap_; }

  /// V*(b), extending the table as needed.
  double solve(const Belief& belief) { return value_rec(belief); }

  /// V*(b) from the table; CoverageError if b was never reached.
  double value(const Belief& belief) const {
    const auto it = table_.find(domain_.canonical_key(belief));
    if (it == table_.end()) throw CoverageError("belief not covered by the value table");
    return it->second;
  }

  /// Q*(b, c) from the table.
  double q_value(const Belief& belief, int computation) const {
    require_computable(belief, computation);
    double q = -domain_.spec().cost;
    for (const auto& o : enumerate_successors(domain_, belief, MetaAction::compute(computation))) {
      q += o.probability * value(o.belief);
    }
    return q;
  }

  /// Optimal action; extends the table when b is new. Ties go to the lowest
  /// index and Terminate wins unless some computation is strictly better.
  MetaAction optimal_action(const Belief& belief) {
    if (belief.terminated) throw LifecycleError("cannot act on an absorbing belief");
    if (remaining_computations(domain_, belief) < 1) return MetaAction::terminate();
    value_rec(belief);
    const double u = domain_.terminal_utility(belief);
    std::vector<double> scores(static_cast<std::size_t>(domain_.spec().num_computations), kNotAvailable);
    for (int c = 0; c < domain_.spec().num_computations; ++c) {
      if (domain_.is_informative(belief, c)) scores[static_cast<std::size_t>(c)] = q_value(belief, c) - u;
    }
    return act_on_scores(scores);
  }

  /// Versioned CSV dump: a header line with the spec hash, then key rows.
  void export_csv(std::ostream& out) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(spec_hash(domain_.spec())));
    out << "# metareason value table v1 spec_hash=" << buf << " states=" << table_.size() << "\n";
    out << "key,belief,value\n";
    std::vector<std::pair<BeliefKey, double>> rows(table_.begin(), table_.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.first.hi != b.first.hi ? a.first.hi < b.first.hi : a.first.lo < b.first.lo;
    });
    for (const auto& [key, v] : rows) {
      char line[128];
      std::snprintf(line, sizeof line, "%016llx%016llx", static_cast<unsigned long long>(key.hi),
                    static_cast<unsigned long long>(key.lo));
      char num[32];
      std::snprintf(num, sizeof num, "%.17g", v);
      out << line << ',' << domain_.describe_key(key) << ',' << num << '\n';
    }
  }

 private:
  void require_computable(const Belief& belief, int computation) const {
    if (computation < 0 || computation >= domain_.spec().num_computations) {
      throw InvalidActionError("computation index out of range");
    }
    if (remaining_computations(domain_, belief) < 1) {
      throw InvalidActionError("only terminate is available at the last step");
    }
  }

  double value_rec(const Belief& belief) {
    const BeliefKey key = domain_.canonical_key(belief);
    if (auto it = table_.find(key); it != table_.end()) return it->second;
    double best = domain_.terminal_utility(belief);
    if (remaining_computations(domain_, belief) >= 1) {
      for (int c = 0; c < domain_.spec().num_computations; ++c) {
        if (!domain_.is_informative(belief, c)) continue;
        double q = -domain_.spec().cost;
        for (const auto& o : enumerate_successors(domain_, belief, MetaAction::compute(c))) {
          q += o.probability * value_rec(o.belief);
        }
        best = std::max(best, q);
      }
    }
    if (table_.size() >= state_cap_) {
      throw ResourceLimitError("value table exceeded the state cap of " + std::to_string(state_cap_));
    }
    table_.emplace(key, best);
    return best;
  }

  D domain_;
  std::size_t state_cap_;
  absl::flat_hash_map<BeliefKey, double> table_;
};

/// VOC(c, b) = Q*(b, c) - U(b) from a solved table.
template <CanonicalMetaMdp D>
double exact_voc(const ExactSolver<D>& solver, const typename D::Belief& belief, MetaAction action) {
  if (action.is_terminate()) return 0.0;
  return solver.q_value(belief, action.index()) - solver.domain().terminal_utility(belief);
}

template <CanonicalMetaMdp D>
Policy<typename D::Belief> make_optimal_policy(std::shared_ptr<ExactSolver<D>> solver) {
  return [solver](const typename D::Belief& b) { return solver->optimal_action(b); };
}

/// Expected return of a fixed policy from `initial`, by recursion over the
/// beliefs the policy reaches. Like the episode runner, Terminate is forced at
/// step h-1. Memoized on the belief itself: an arbitrary policy need not be
/// symmetric under the canonical key.
template <MetaMdp D>
double policy_value(const D& domain, const typename D::Belief& initial, const Policy<typename D::Belief>& policy,
                    std::size_t state_cap = kDefaultStateCap) {
  using Belief = typename D::Belief;
  struct Hash {
    const D* domain;
    std::size_t operator()(const Belief& b) const { return static_cast<std::size_t>(domain->stable_hash(b)); }
  };
  absl::flat_hash_map<Belief, double, Hash> memo(0, Hash{&domain});
  const int last_step = domain.spec().horizon - 1;
  auto rec = [&](auto& self, const Belief& belief) -> double {
    if (auto it = memo.find(belief); it != memo.end()) return it->second;
    const MetaAction action = belief.step >= last_step ? MetaAction::terminate() : policy(belief);
    double v = 0.0;
    if (action.is_terminate()) {
      v = domain.terminal_utility(belief);
    } else {
      v = -domain.spec().cost;
      for (const auto& o : enumerate_successors(domain, belief, action)) v += o.probability * self(self, o.belief);
    }
    if (memo.size() >= state_cap) {
      throw ResourceLimitError("policy evaluation exceeded the state cap of " + std::to_string(state_cap));
    }
    memo.emplace(belief, v);
    return v;
  };
  return rec(rec, initial);
}

}  // namespace metareason

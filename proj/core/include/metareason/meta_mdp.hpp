#pragma once

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "metareason/error.hpp"
#include "metareason/random.hpp"

namespace metareason {

/// A metalevel action: either a computation (0-based index) or the
/// termination action that stops deliberating and acts on the current belief.
class MetaAction {
 public:
  static constexpr MetaAction terminate() noexcept { return MetaAction(-1); }
  static MetaAction compute(int index) {
    if (index < 0) throw InvalidActionError("computation index must be non-negative");
    return MetaAction(index);
  }

  constexpr bool is_terminate() const noexcept { return index_ < 0; }
  constexpr bool is_compute() const noexcept { return index_ >= 0; }
  /// Index of the computation; -1 for Terminate.
  constexpr int index() const noexcept { return index_; }

  std::string to_string() const {
    return is_terminate() ? std::string("terminate") : "compute(" + std::to_string(index_) + ")";
  }

  friend constexpr bool operator==(MetaAction, MetaAction) = default;

 private:
  constexpr explicit MetaAction(int index) noexcept : index_(index) {}
  int index_;
};

/// Shape of a metalevel MDP shared by all domains.
struct MetaMdpSpec {
  double cost = 0.0;         // lambda, reward units per computation
  int horizon = 1;           // max metalevel actions; the last one must be Terminate
  int num_computations = 1;

  void validate() const {
    if (!(cost >= 0.0)) throw ConfigError("computation cost must be >= 0");
    if (horizon < 1) throw ConfigError("horizon must be positive");
    if (num_computations < 1) throw ConfigError("need at least one computation");
  }
};

template <class Belief>
struct Outcome {
  Belief belief;
  double probability;
};

/// Canonical (symmetry-reduced where the domain allows it) 128-bit key of a
/// belief together with its remaining-step budget.
struct BeliefKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const BeliefKey&, const BeliefKey&) = default;
  template <class H>
  friend H AbslHashValue(H h, const BeliefKey& key) {
    return H::combine(std::move(h), key.hi, key.lo);
  }
};

/// Appends fixed-width fields into a BeliefKey, failing loudly on overflow.
class KeyPacker {
 public:
  void put(std::uint64_t value, int bits) {
    if (bits <= 0 || bits > 64 || (bits < 64 && value >> bits) != 0) {
      throw ResourceLimitError("belief parameter does not fit the canonical key encoding");
    }
    if (used_ + bits > 128) throw ResourceLimitError("belief too large for a 128-bit canonical key");
    for (int i = 0; i < bits; ++i) {
      const std::uint64_t bit = (value >> i) & 1U;
      const int pos = used_ + i;
      if (pos < 64) {
        key_.lo |= bit << pos;
      } else {
        key_.hi |= bit << (pos - 64);
      }
    }
    used_ += bits;
  }
  BeliefKey key() const noexcept { return key_; }

 private:
  BeliefKey key_{};
  int used_ = 0;
};

class KeyReader {
 public:
  explicit KeyReader(BeliefKey key) : key_(key) {}
  std::uint64_t get(int bits) {
    std::uint64_t value = 0;
    for (int i = 0; i < bits; ++i) {
      const int pos = used_ + i;
      const std::uint64_t bit = pos < 64 ? (key_.lo >> pos) & 1U : (key_.hi >> (pos - 64)) & 1U;
      value |= bit << i;
    }
    used_ += bits;
    return value;
  }

 private:
  BeliefKey key_;
  int used_ = 0;
};

/// Requirements on a concrete metalevel MDP. Beliefs are immutable values that
/// carry their own step counter and absorbing flag; domains only transform the
/// payload.
template <class D>
concept MetaMdp = requires(const D& d, const typename D::Belief& b, int c, Rng& rng) {
  typename D::Belief;
  { d.spec() } -> std::convertible_to<const MetaMdpSpec&>;
  { d.initial_belief() } -> std::same_as<typename D::Belief>;
  { d.terminal_utility(b) } -> std::convertible_to<double>;
  { d.successors(b, c) } -> std::same_as<std::vector<Outcome<typename D::Belief>>>;
  { d.sample_successor(b, c, rng) } -> std::same_as<typename D::Belief>;
  { d.is_informative(b, c) } -> std::convertible_to<bool>;
  { d.evidence_count(b, c) } -> std::convertible_to<int>;
  { d.relevant(c, c) } -> std::convertible_to<bool>;
  { d.num_parameters() } -> std::convertible_to<int>;
  { d.stable_hash(b) } -> std::convertible_to<std::uint64_t>;
  { b.step } -> std::convertible_to<int>;
  { b.terminated } -> std::convertible_to<bool>;
};

namespace detail {

template <MetaMdp D>
void require_live(const D& domain, const typename D::Belief& belief) {
  if (belief.terminated) throw LifecycleError("belief is absorbing; deliberation already terminated");
  if (belief.step < 0 || belief.step >= domain.spec().horizon) {
    throw LifecycleError("belief step " + std::to_string(belief.step) + " outside horizon " +
                         std::to_string(domain.spec().horizon));
  }
}

template <MetaMdp D>
void require_computation(const D& domain, MetaAction action) {
  if (action.is_terminate()) throw InvalidActionError("a computation is required, got terminate");
  if (action.index() >= domain.spec().num_computations) {
    throw InvalidActionError("computation index " + std::to_string(action.index()) +
                             " out of range (" + std::to_string(domain.spec().num_computations) +
                             " computations)");
  }
}

}  // namespace detail

/// r_meta(b, Terminate): expected utility of acting on the current belief.
template <MetaMdp D>
double termination_utility(const D& domain, const typename D::Belief& belief) {
  if (belief.terminated) throw LifecycleError("termination utility of an absorbing belief");
  return domain.terminal_utility(belief);
}

/// Exact successor distribution of a computation, with the step counter advanced.
template <MetaMdp D>
std::vector<Outcome<typename D::Belief>> enumerate_successors(const D& domain,
                                                              const typename D::Belief& belief,
                                                              MetaAction action) {
  detail::require_computation(domain, action);
  if (belief.terminated) throw LifecycleError("cannot compute on an absorbing belief");
  auto outcomes = domain.successors(belief, action.index());
  for (auto& outcome : outcomes) outcome.belief.step = belief.step + 1;
  return outcomes;
}

/// One stochastic metalevel step. Computations cost lambda; Terminate pays the
/// termination utility and yields the absorbing belief.
template <MetaMdp D>
std::pair<typename D::Belief, double> sample_transition(const D& domain,
                                                        const typename D::Belief& belief,
                                                        MetaAction action, Rng& rng) {
  detail::require_live(domain, belief);
  if (action.is_terminate()) {
    auto next = belief;
    next.terminated = true;
    next.step = belief.step + 1;
    return {std::move(next), domain.terminal_utility(belief)};
  }
  detail::require_computation(domain, action);
  if (belief.step >= domain.spec().horizon - 1) {
    throw InvalidActionError("last metalevel action before the horizon must be terminate");
  }
  auto next = domain.sample_successor(belief, action.index(), rng);
  next.step = belief.step + 1;
  return {std::move(next), -domain.spec().cost};
}

/// Number of computations that may still be performed from this belief.
template <MetaMdp D>
int remaining_computations(const D& domain, const typename D::Belief& belief) {
  return std::max(0, domain.spec().horizon - 1 - belief.step);
}

}  // namespace metareason

#include "metareason/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace metareason {

void WeightVector::validate(int horizon) const {
  constexpr double kTol = 1e-9;
  for (double w : {w1, w2, w3}) {
    if (!(w >= -kTol && w <= 1.0 + kTol)) throw ConstraintError("w1..w3 must lie in [0, 1]");
  }
  if (std::abs(w1 + w2 + w3 - 1.0) > kTol) throw ConstraintError("w1 + w2 + w3 must equal 1");
  if (!(w4 >= 1.0 - kTol && w4 <= static_cast<double>(horizon) + kTol)) {
    throw ConstraintError("w4 must lie in [1, " + std::to_string(horizon) + "]");
  }
}

MetaAction act_on_scores(const std::vector<double>& scores) {
  int best = -1;
  double best_score = 0.0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (scores[c] > best_score) {
      best = static_cast<int>(c);
      best_score = scores[c];
    }
  }
  return best < 0 ? MetaAction::terminate() : MetaAction::compute(best);
}

std::vector<double> voi1_all(const TreeDomain& domain, const TreeBelief& belief) {
  auto out = tree_voi1_all(belief);
  for (int c = 0; c < domain.num_nodes(); ++c) {
    if (!domain.is_informative(belief, c)) out[static_cast<std::size_t>(c)] = kNotAvailable;
  }
  return out;
}

MetaAction uniform_allocation_act(const TornadoDomain& domain, const TornadoBelief& belief) {
  if (belief.sims_remaining <= 0 || at_forced_termination(domain, belief)) return MetaAction::terminate();
  return MetaAction::compute(belief.step % domain.num_cities());
}

namespace {

double best_other(const BanditBelief& belief, std::size_t skip) {
  double best = -1.0;  // below every mean, so a lone arm competes with nothing
  for (std::size_t i = 0; i < belief.arms.size(); ++i) {
    if (i != skip) best = std::max(best, belief.arms[i].mean());
  }
  return best;
}

// Backward induction over the (successes, failures) lattice of one arm.
// Returns the value at the root and, through q, the value of sampling once.
double single_arm_solve(const BetaParams& arm, double other, double cost, int remaining, double* q) {
  std::vector<double> next;
  std::vector<double> layer;
  for (int d = remaining; d >= 0; --d) {
    layer.assign(static_cast<std::size_t>(d + 1), 0.0);
    for (int i = 0; i <= d; ++i) {
      const double a = arm.alpha + i;
      const double b = arm.beta + (d - i);
      const double mu = a / (a + b);
      double v = std::max(mu, other);
      if (d < remaining) {
        const double sample = -cost + mu * next[static_cast<std::size_t>(i + 1)] +
                              (1.0 - mu) * next[static_cast<std::size_t>(i)];
        if (d == 0 && q != nullptr) *q = sample;
        v = std::max(v, sample);
      }
      layer[static_cast<std::size_t>(i)] = v;
    }
    next.swap(layer);
  }
  return next[0];
}

}  // namespace

double blinkered_arm_value(const BetaParams& arm, double other, double cost, int remaining) {
  if (remaining < 0) throw ConfigError("remaining computations must be >= 0");
  return single_arm_solve(arm, other, cost, remaining, nullptr);
}

std::vector<double> blinkered_vocs(const BanditDomain& domain, const BanditBelief& belief) {
  std::vector<double> out(belief.arms.size(), kNotAvailable);
  const int remaining = remaining_computations(domain, belief);
  if (remaining < 1) return out;
  const double u = domain.terminal_utility(belief);
  for (std::size_t i = 0; i < belief.arms.size(); ++i) {
    double q = kNotAvailable;
    single_arm_solve(belief.arms[i], best_other(belief, i), domain.spec().cost, remaining, &q);
    out[i] = q - u;
  }
  return out;
}

MetaAction blinkered_act(const BanditDomain& domain, const BanditBelief& belief) {
  if (belief.terminated) throw LifecycleError("cannot act on an absorbing belief");
  if (at_forced_termination(domain, belief)) return MetaAction::terminate();
  return act_on_scores(blinkered_vocs(domain, belief));
}

namespace {

// Q^RB evaluated relative to the reward accumulated above a node. tau is the
// best alternative path value (relative to the same offset) that does not go
// through the node's subtree.
class RecursiveBlinkered {
 public:
  RecursiveBlinkered(const TreeBelief& belief, double cost)
      : belief_(belief), nodes_(belief.num_nodes()), cost_(cost), bound_(2 * (belief.height + 1)) {
    const auto n = static_cast<std::size_t>(nodes_);
    down_.assign(n, 0);
    for (int i = nodes_ - 1; i >= 0; --i) down_[idx(i)] = value(i) + child_max(i);
    build_descendants();
    memo_.assign(n * static_cast<std::size_t>(2 * bound_ + 2), kUnset);
  }

  /// Absolute Q^RB(b, c); c must be unrevealed.
  double q(int c, int prefix, int tau_or_none) { return prefix + qrel(c, tau_or_none); }

  static constexpr int kNoAlternative = -(1 << 20);

  int value(int i) const { return belief_.values[idx(i)]; }
  int down(int i) const { return down_[idx(i)]; }

 private:
  struct Link {
    int node;
    int between;  // sum of values strictly between the ancestor and node
    int branch;   // best path through the ancestor leaving before node, after the ancestor
  };

  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  int child_max(int i) const {
    if (tree_layout::is_leaf(i, nodes_)) return 0;
    return std::max(down_[idx(tree_layout::left_child(i))], down_[idx(tree_layout::right_child(i))]);
  }

  void build_descendants() {
    links_.assign(idx(nodes_), {});
    for (int n = 0; n < nodes_; ++n) {
      if (tree_layout::is_leaf(n, nodes_)) continue;
      const int l = tree_layout::left_child(n);
      const int r = tree_layout::right_child(n);
      collect(n, l, 0, down_[idx(r)]);
      collect(n, r, 0, down_[idx(l)]);
    }
  }

  void collect(int anchor, int node, int between, int branch) {
    if (value(node) == 0) links_[idx(anchor)].push_back({node, between, branch});
    if (tree_layout::is_leaf(node, nodes_)) return;
    const int through = between + value(node);
    const int l = tree_layout::left_child(node);
    const int r = tree_layout::right_child(node);
    collect(anchor, l, through, std::max(branch, through + down_[idx(r)]));
    collect(anchor, r, through, std::max(branch, through + down_[idx(l)]));
  }

  double qrel(int n, int tau) {
    if (tau != kNoAlternative && (tau < -bound_ || tau > bound_)) {
      throw std::logic_error("recursive blinkered threshold out of range");
    }
    const std::size_t slot = idx(n) * static_cast<std::size_t>(2 * bound_ + 2) +
                             (tau == kNoAlternative ? 0 : static_cast<std::size_t>(tau + bound_ + 1));
    double& cached = memo_[slot];
    if (!std::isnan(cached)) return cached;
    const int below = child_max(n);
    double total = 0.0;
    for (int v : {1, -1}) {
      double best = tau == kNoAlternative ? v + below : std::max(tau, v + below);
      for (const Link& link : links_[idx(n)]) {
        const int alt = tau == kNoAlternative ? v + link.branch : std::max(tau, v + link.branch);
        const int tau_m = alt - v - link.between;
        best = std::max(best, v + link.between + qrel(link.node, tau_m));
      }
      total += 0.5 * best;
    }
    cached = total - cost_;
    return cached;
  }

  const TreeBelief& belief_;
  int nodes_;
  double cost_;
  int bound_;
  std::vector<int> down_;
  std::vector<std::vector<Link>> links_;
  std::vector<double> memo_;
};

}  // namespace

std::vector<double> recursively_blinkered_vocs(const TreeDomain& domain, const TreeBelief& belief) {
  RecursiveBlinkered rb(belief, domain.spec().cost);
  const int nodes = belief.num_nodes();
  std::vector<int> prefix(static_cast<std::size_t>(nodes), 0);
  std::vector<int> avoid(static_cast<std::size_t>(nodes), RecursiveBlinkered::kNoAlternative);
  std::vector<double> out(static_cast<std::size_t>(nodes), kNotAvailable);
  const double u = rb.down(0);
  for (int n = 0; n < nodes; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (n > 0) {
      const int p = tree_layout::parent(n);
      const int sibling = n % 2 == 1 ? n + 1 : n - 1;
      prefix[un] = prefix[static_cast<std::size_t>(p)] + rb.value(p);
      avoid[un] = std::max(avoid[static_cast<std::size_t>(p)], prefix[un] + rb.down(sibling));
    }
    if (rb.value(n) != 0) continue;
    const int tau = avoid[un] == RecursiveBlinkered::kNoAlternative ? avoid[un] : avoid[un] - prefix[un];
    out[un] = rb.q(n, prefix[un], tau) - u;
  }
  return out;
}

MetaAction recursively_blinkered_act(const TreeDomain& domain, const TreeBelief& belief) {
  if (belief.terminated) throw LifecycleError("cannot act on an absorbing belief");
  if (at_forced_termination(domain, belief)) return MetaAction::terminate();
  return act_on_scores(recursively_blinkered_vocs(domain, belief));
}

Policy<TornadoBelief> make_uniform_policy(const TornadoDomain& domain) {
  return [domain](const TornadoBelief& b) { return uniform_allocation_act(domain, b); };
}

Policy<BanditBelief> make_blinkered_policy(const BanditDomain& domain) {
  return [domain](const BanditBelief& b) { return blinkered_act(domain, b); };
}

Policy<TreeBelief> make_recursively_blinkered_policy(const TreeDomain& domain) {
  return [domain](const TreeBelief& b) { return recursively_blinkered_act(domain, b); };
}

}  // namespace metareason

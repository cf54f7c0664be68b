#include "metareason/domains/tree.hpp"

#include <algorithm>
#include <bit>

namespace metareason {

namespace tree_layout {

int depth(int node) noexcept { return std::bit_width(static_cast<unsigned>(node) + 1U) - 1; }

bool is_ancestor(int ancestor, int node) noexcept {
  while (node > ancestor) {
    node = parent(node);
    if (node == ancestor) return true;
  }
  return false;
}

}  // namespace tree_layout

namespace {

__extension__ using u128 = unsigned __int128;

constexpr int kMaxKeyHeight = 5;  // 63 nodes * 2 bits fit into 128 bits

u128 canonical_code(const std::vector<std::int8_t>& values, int node, int subtree_height) {
  const auto own = static_cast<u128>(values[static_cast<std::size_t>(node)] + 1);
  if (subtree_height == 0) return own;
  const u128 a = canonical_code(values, tree_layout::left_child(node), subtree_height - 1);
  const u128 b = canonical_code(values, tree_layout::right_child(node), subtree_height - 1);
  const int shift = 2 * tree_layout::node_count(subtree_height - 1);
  const auto [lo, hi] = std::minmax(a, b);
  return (((own << shift) | lo) << shift) | hi;
}

}  // namespace

int max_path_value(int height, std::span<const std::int8_t> values) {
  const int nodes = tree_layout::node_count(height);
  if (static_cast<int>(values.size()) != nodes) throw ConstraintError("tree value count mismatch");
  std::vector<int> best(static_cast<std::size_t>(nodes));
  for (int i = nodes - 1; i >= 0; --i) {
    int below = 0;
    if (!tree_layout::is_leaf(i, nodes)) {
      below = std::max(best[static_cast<std::size_t>(tree_layout::left_child(i))],
                       best[static_cast<std::size_t>(tree_layout::right_child(i))]);
    }
    best[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(i)] + below;
  }
  return best[0];
}

double tree_terminal(const TreeBelief& belief) {
  return max_path_value(belief.height, belief.values);
}

TreeDomain::TreeDomain(int height, double cost, int horizon)
    : height_(height), spec_{cost, 0, 0} {
  if (height < 1 || height > 10) throw ConfigError("tree height must be in [1, 10]");
  spec_.num_computations = tree_layout::node_count(height);
  spec_.horizon = horizon > 0 ? horizon : spec_.num_computations + 1;
  spec_.validate();
}

TreeBelief TreeDomain::initial_belief() const {
  return Belief{height_, std::vector<std::int8_t>(static_cast<std::size_t>(num_nodes()), 0), 0, false};
}

double TreeDomain::terminal_utility(const Belief& belief) const {
  check_shape(belief);
  return tree_terminal(belief);
}

double TreeDomain::utility_given_theta(std::span<const std::int8_t> rewards) const {
  return max_path_value(height_, rewards);
}

std::vector<Outcome<TreeBelief>> TreeDomain::successors(const Belief& belief, int computation) const {
  check_shape(belief);
  const auto i = static_cast<std::size_t>(computation);
  if (belief.values.at(i) != 0) return {{belief, 1.0}};
  Belief up = belief;
  up.values[i] = 1;
  Belief down = belief;
  down.values[i] = -1;
  return {{std::move(up), 0.5}, {std::move(down), 0.5}};
}

TreeBelief TreeDomain::sample_successor(const Belief& belief, int computation, Rng& rng) const {
  check_shape(belief);
  const auto i = static_cast<std::size_t>(computation);
  Belief next = belief;
  if (next.values.at(i) == 0) next.values[i] = bernoulli(rng, 0.5) ? 1 : -1;
  return next;
}

bool TreeDomain::is_informative(const Belief& belief, int computation) const {
  return belief.values.at(static_cast<std::size_t>(computation)) == 0;
}

int TreeDomain::evidence_count(const Belief& belief, int computation) const {
  return is_informative(belief, computation) ? 0 : 1;
}

bool TreeDomain::relevant(int computation, int parameter) const noexcept {
  return computation == parameter || tree_layout::is_ancestor(parameter, computation) ||
         tree_layout::is_ancestor(computation, parameter);
}

void TreeDomain::check_shape(const Belief& belief) const {
  if (belief.height != height_ || belief.num_nodes() != num_nodes()) {
    throw ConstraintError("tree belief shape does not match the domain");
  }
}

void TreeDomain::validate(const Belief& belief) const {
  check_shape(belief);
  for (auto v : belief.values) {
    if (v < -1 || v > 1) throw ConstraintError("tree node probabilities must be 0, 0.5 or 1");
  }
  if (belief.step < 0 || belief.step > spec_.horizon) throw ConstraintError("step outside horizon");
}

std::uint64_t TreeDomain::stable_hash(const Belief& belief) const {
  return StableHasher().add_bytes(belief.values.data(), belief.values.size()).digest();
}

BeliefKey TreeDomain::canonical_key(const Belief& belief) const {
  check_shape(belief);
  if (height_ > kMaxKeyHeight) throw ResourceLimitError("tree too tall for a canonical key");
  u128 code = canonical_code(belief.values, 0, height_);
  if (spec_.horizon <= num_nodes()) {
    // A short horizon binds, so the remaining budget becomes part of the state.
    if (2 * num_nodes() + 8 > 128) throw ResourceLimitError("tree too tall for a short-horizon key");
    const auto remaining = static_cast<u128>(std::max(0, spec_.horizon - 1 - belief.step));
    code |= remaining << (2 * num_nodes());
  }
  return BeliefKey{static_cast<std::uint64_t>(code >> 64), static_cast<std::uint64_t>(code)};
}

std::string TreeDomain::describe_key(const BeliefKey& key) const {
  // Pre-order node values of the canonical tree.
  u128 code = (static_cast<u128>(key.hi) << 64) | key.lo;
  std::string out(static_cast<std::size_t>(num_nodes()), '?');
  const auto remaining = static_cast<int>(code >> (2 * num_nodes()));
  for (int i = num_nodes() - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = "-0+"[static_cast<int>(code & 3U)];
    code >>= 2;
  }
  return spec_.horizon <= num_nodes() ? out + "|r=" + std::to_string(remaining) : out;
}

double TreeDomain::canonical_state_count() const {
  double count = 3.0;
  for (int h = 1; h <= height_; ++h) count = 3.0 * count * (count + 1.0) / 2.0;
  return count;
}

}  // namespace metareason

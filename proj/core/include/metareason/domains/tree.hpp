#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metareason/meta_mdp.hpp"

namespace metareason {

/// Complete binary tree in level order: root 0, children of i at 2i+1, 2i+2.
namespace tree_layout {

constexpr int node_count(int height) noexcept { return (1 << (height + 1)) - 1; }
constexpr int parent(int node) noexcept { return (node - 1) / 2; }
constexpr int left_child(int node) noexcept { return 2 * node + 1; }
constexpr int right_child(int node) noexcept { return 2 * node + 2; }
constexpr bool is_leaf(int node, int nodes) noexcept { return left_child(node) >= nodes; }
int depth(int node) noexcept;
/// True when `ancestor` lies strictly above `node` on its root path.
bool is_ancestor(int ancestor, int node) noexcept;

}  // namespace tree_layout

/// Belief over the +-1 rewards of a complete binary tree. Each node stores the
/// expected reward 2p - 1, so -1 / 0 / +1 encode p = 0 / 0.5 / 1.
struct TreeBelief {
  int height = 0;
  std::vector<std::int8_t> values;
  int step = 0;
  bool terminated = false;

  double probability(int node) const { return 0.5 * (values.at(static_cast<std::size_t>(node)) + 1); }
  bool revealed(int node) const { return values.at(static_cast<std::size_t>(node)) != 0; }
  int num_nodes() const noexcept { return static_cast<int>(values.size()); }

  friend bool operator==(const TreeBelief&, const TreeBelief&) = default;
};

/// Max over root-to-leaf paths of the summed node values; linear-time DP.
int max_path_value(int height, std::span<const std::int8_t> values);

/// r_meta(b, Terminate) of the tree domain.
double tree_terminal(const TreeBelief& belief);

/// Bernoulli metalevel tree: computation c_i reveals the reward of node i.
class TreeDomain {
 public:
  using Belief = TreeBelief;

  /// Default horizon lets every node be revealed before terminating.
  TreeDomain(int height, double cost, int horizon = 0);

  const MetaMdpSpec& spec() const noexcept { return spec_; }
  int height() const noexcept { return height_; }
  int num_nodes() const noexcept { return spec_.num_computations; }
  int num_parameters() const noexcept { return spec_.num_computations; }

  Belief initial_belief() const;
  double terminal_utility(const Belief& belief) const;
  double utility_given_theta(std::span<const std::int8_t> rewards) const;

  std::vector<Outcome<Belief>> successors(const Belief& belief, int computation) const;
  Belief sample_successor(const Belief& belief, int computation, Rng& rng) const;
  bool is_informative(const Belief& belief, int computation) const;
  int evidence_count(const Belief& belief, int computation) const;
  /// Node i is relevant to c_j iff i is j, an ancestor of j or a descendant of j.
  bool relevant(int computation, int parameter) const noexcept;

  void validate(const Belief& belief) const;
  std::uint64_t stable_hash(const Belief& belief) const;
  /// Invariant under swapping left/right subtrees anywhere. The remaining step
  /// budget only enters the key when the horizon can bind (horizon <= k).
  BeliefKey canonical_key(const Belief& belief) const;
  std::string describe_key(const BeliefKey& key) const;
  /// Number of distinct canonical beliefs over {-1,0,1}^k.
  double canonical_state_count() const;

 private:
  void check_shape(const Belief& belief) const;

  int height_;
  MetaMdpSpec spec_;
};

}  // namespace metareason

#include "metareason/domains/bandit.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace metareason {

namespace {

constexpr int kParamBits = 7;
constexpr int kRemainingBits = 7;
constexpr int kMaxKeyArms = 8;

std::uint64_t integral_param(double value) {
  const double rounded = std::round(value);
  if (rounded != value || value < 1.0) {
    throw ConfigError("canonical bandit keys need integral beta parameters >= 1");
  }
  return static_cast<std::uint64_t>(rounded);
}

}  // namespace

double bandit_terminal(const BanditBelief& belief) {
  double best = -1.0;
  for (const auto& arm : belief.arms) best = std::max(best, arm.mean());
  return best;
}

BanditDomain::BanditDomain(int num_arms, double cost, int horizon) : spec_{cost, horizon, num_arms} {
  spec_.validate();
}

BanditBelief BanditDomain::initial_belief() const {
  return Belief{std::vector<BetaParams>(static_cast<std::size_t>(num_arms()), BetaParams{1.0, 1.0}), 0,
                false};
}

double BanditDomain::terminal_utility(const Belief& belief) const {
  check_arm_count(belief);
  return bandit_terminal(belief);
}

std::vector<Outcome<BanditBelief>> BanditDomain::successors(const Belief& belief,
                                                            int computation) const {
  check_arm_count(belief);
  const auto i = static_cast<std::size_t>(computation);
  const BetaParams arm = belief.arms.at(i);
  Belief up = belief;
  up.arms[i].alpha += 1.0;
  Belief down = belief;
  down.arms[i].beta += 1.0;
  const double p = arm.mean();
  return {{std::move(up), p}, {std::move(down), 1.0 - p}};
}

BanditBelief BanditDomain::sample_successor(const Belief& belief, int computation, Rng& rng) const {
  check_arm_count(belief);
  const auto i = static_cast<std::size_t>(computation);
  Belief next = belief;
  if (bernoulli(rng, belief.arms.at(i).mean())) {
    next.arms[i].alpha += 1.0;
  } else {
    next.arms[i].beta += 1.0;
  }
  return next;
}

int BanditDomain::evidence_count(const Belief& belief, int computation) const {
  const auto& arm = belief.arms.at(static_cast<std::size_t>(computation));
  return static_cast<int>(arm.alpha + arm.beta);
}

void BanditDomain::check_arm_count(const Belief& belief) const {
  if (static_cast<int>(belief.arms.size()) != num_arms()) {
    throw ConstraintError("bandit belief has " + std::to_string(belief.arms.size()) +
                          " arms, domain expects " + std::to_string(num_arms()));
  }
}

void BanditDomain::validate(const Belief& belief) const {
  check_arm_count(belief);
  for (const auto& arm : belief.arms) {
    if (!(arm.alpha > 0.0) || !(arm.beta > 0.0)) throw ConstraintError("arm parameters must be > 0");
  }
  if (belief.step < 0 || belief.step > spec_.horizon) throw ConstraintError("step outside horizon");
}

std::uint64_t BanditDomain::stable_hash(const Belief& belief) const {
  StableHasher hasher;
  for (const auto& arm : belief.arms) hasher.add(arm.alpha).add(arm.beta);
  return hasher.digest();
}

BeliefKey BanditDomain::canonical_key(const Belief& belief) const {
  check_arm_count(belief);
  if (num_arms() > kMaxKeyArms) throw ResourceLimitError("too many arms for a canonical key");
  std::array<std::uint64_t, kMaxKeyArms> codes{};
  for (std::size_t i = 0; i < belief.arms.size(); ++i) {
    codes[i] = (integral_param(belief.arms[i].alpha) << kParamBits) | integral_param(belief.arms[i].beta);
  }
  std::sort(codes.begin(), codes.begin() + num_arms());
  KeyPacker packer;
  packer.put(static_cast<std::uint64_t>(std::max(0, spec_.horizon - 1 - belief.step)), kRemainingBits);
  for (int i = 0; i < num_arms(); ++i) packer.put(codes[static_cast<std::size_t>(i)], 2 * kParamBits);
  return packer.key();
}

std::string BanditDomain::describe_key(const BeliefKey& key) const {
  KeyReader reader(key);
  const auto remaining = reader.get(kRemainingBits);
  std::string out;
  for (int i = 0; i < num_arms(); ++i) {
    const auto code = reader.get(2 * kParamBits);
    if (i > 0) out += '|';
    out += std::to_string(code >> kParamBits) + ":" + std::to_string(code & ((1U << kParamBits) - 1));
  }
  return out + "|r=" + std::to_string(remaining);
}

}  // namespace metareason

#include "metareason/domains/stopping.hpp"

#include <algorithm>
#include <cmath>

namespace metareason {

namespace {

std::uint64_t integral_param(double value) {
  const double rounded = std::round(value);
  if (rounded != value || value < 0.0) {
    throw ConfigError("canonical keys need integral beta parameters");
  }
  return static_cast<std::uint64_t>(rounded);
}

}  // namespace

double p_correct(const StoppingBelief& belief) {
  return std::max(belief.alpha, belief.beta) / (belief.alpha + belief.beta);
}

double stopping_terminal(const StoppingBelief& belief) { return 2.0 * p_correct(belief) - 1.0; }

StoppingDomain::StoppingDomain(double cost, int horizon, StoppingScale scale)
    : spec_{cost, horizon, 1}, scale_(scale) {
  spec_.validate();
}

double StoppingDomain::terminal_utility(const Belief& belief) const {
  return scale_ == StoppingScale::kSigned ? stopping_terminal(belief) : p_correct(belief);
}

double StoppingDomain::utility_given_theta(double theta) const {
  const double p = std::max(theta, 1.0 - theta);
  return scale_ == StoppingScale::kSigned ? 2.0 * p - 1.0 : p;
}

std::vector<Outcome<StoppingBelief>> StoppingDomain::successors(const Belief& belief,
                                                                int computation) const {
  if (computation != 0) throw InvalidActionError("stopping domain has a single computation");
  const double p = belief.alpha / (belief.alpha + belief.beta);
  Belief up = belief;
  up.alpha += 1.0;
  Belief down = belief;
  down.beta += 1.0;
  return {{up, p}, {down, 1.0 - p}};
}

StoppingBelief StoppingDomain::sample_successor(const Belief& belief, int computation,
                                                Rng& rng) const {
  if (computation != 0) throw InvalidActionError("stopping domain has a single computation");
  Belief next = belief;
  if (bernoulli(rng, belief.alpha / (belief.alpha + belief.beta))) {
    next.alpha += 1.0;
  } else {
    next.beta += 1.0;
  }
  return next;
}

void StoppingDomain::validate(const Belief& belief) const {
  if (!(belief.alpha > 0.0) || !(belief.beta > 0.0)) {
    throw ConstraintError("stopping belief needs positive beta parameters");
  }
  if (belief.step < 0 || belief.step > spec_.horizon) throw ConstraintError("step outside horizon");
}

std::uint64_t StoppingDomain::stable_hash(const Belief& belief) const {
  return StableHasher().add(belief.alpha).add(belief.beta).digest();
}

BeliefKey StoppingDomain::canonical_key(const Belief& belief) const {
  KeyPacker packer;
  packer.put(integral_param(belief.alpha), 16);
  packer.put(integral_param(belief.beta), 16);
  packer.put(static_cast<std::uint64_t>(std::max(0, spec_.horizon - 1 - belief.step)), 16);
  return packer.key();
}

std::string StoppingDomain::describe_key(const BeliefKey& key) const {
  KeyReader reader(key);
  const auto alpha = reader.get(16);
  const auto beta = reader.get(16);
  const auto remaining = reader.get(16);
  return std::to_string(alpha) + ":" + std::to_string(beta) + "|r=" + std::to_string(remaining);
}

}  // namespace metareason

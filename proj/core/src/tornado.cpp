#include "metareason/domains/tornado.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace metareason {

namespace {

constexpr int kCountBits = 7;
constexpr int kMaxKeyCities = 8;

}  // namespace

int tornado_budget(const TornadoTimingModel& timing) {
  if (!(timing.total_time > 0.0)) throw ConfigError("total time T must be positive");
  if (!(timing.sim_duration > 0.0)) throw ConfigError("simulation duration must be positive");
  if (!(timing.metareason_duration >= 0.0)) throw ConfigError("metareasoning duration must be >= 0");
  const double ratio = timing.total_time / (timing.metareason_duration + timing.sim_duration);
  // Guard exact quotients (24 / 0.5) against representation error.
  return static_cast<int>(std::floor(ratio * (1.0 + 1e-12)));
}

double tornado_terminal(const TornadoBelief& belief, const TornadoCosts& costs) {
  double total = 0.0;
  for (const auto& city : belief.cities) {
    total += std::max(city.mean() * costs.false_negative, costs.evacuate);
  }
  return total;
}

std::vector<bool> evacuation_decisions(const TornadoBelief& belief, const TornadoCosts& costs) {
  std::vector<bool> out;
  out.reserve(belief.cities.size());
  for (const auto& city : belief.cities) {
    out.push_back(costs.evacuate > city.mean() * costs.false_negative);
  }
  return out;
}

TornadoDomain::TornadoDomain(int num_cities, int budget, BetaParams prior, TornadoCosts costs)
    : spec_{0.0, budget + 1, num_cities}, prior_(prior), costs_(costs) {
  if (budget < 0) throw ConfigError("simulation budget must be >= 0");
  if (!(prior.alpha > 0.0) || !(prior.beta > 0.0)) throw ConfigError("prior must be positive");
  if (!(costs.false_negative < 0.0) || !(costs.evacuate < 0.0)) throw ConfigError("tornado costs must be negative");
  spec_.validate();
}

TornadoBelief TornadoDomain::initial_belief() const {
  return Belief{std::vector<BetaParams>(static_cast<std::size_t>(num_cities()), prior_), budget(), 0,
                false};
}

double TornadoDomain::city_utility(const BetaParams& city) const noexcept {
  return std::max(city.mean() * costs_.false_negative, costs_.evacuate);
}

double TornadoDomain::city_utility_given_theta(double theta) const noexcept {
  return std::max(theta * costs_.false_negative, costs_.evacuate);
}

double TornadoDomain::terminal_utility(const Belief& belief) const {
  check_city_count(belief);
  return tornado_terminal(belief, costs_);
}

std::vector<Outcome<TornadoBelief>> TornadoDomain::successors(const Belief& belief,
                                                              int computation) const {
  check_city_count(belief);
  const auto i = static_cast<std::size_t>(computation);
  const BetaParams city = belief.cities.at(i);
  Belief up = belief;
  Belief down = belief;
  if (belief.sims_remaining <= 0) return {{belief, 1.0}};
  up.cities[i].alpha += 1.0;
  down.cities[i].beta += 1.0;
  up.sims_remaining -= 1;
  down.sims_remaining -= 1;
  return {{std::move(up), city.mean()}, {std::move(down), 1.0 - city.mean()}};
}

TornadoBelief TornadoDomain::sample_successor(const Belief& belief, int computation, Rng& rng) const {
  check_city_count(belief);
  const auto i = static_cast<std::size_t>(computation);
  Belief next = belief;
  if (belief.sims_remaining <= 0) return next;
  if (bernoulli(rng, belief.cities.at(i).mean())) {
    next.cities[i].alpha += 1.0;
  } else {
    next.cities[i].beta += 1.0;
  }
  next.sims_remaining -= 1;
  return next;
}

int TornadoDomain::evidence_count(const Belief& belief, int computation) const {
  const auto& city = belief.cities.at(static_cast<std::size_t>(computation));
  return static_cast<int>(std::lround(city.alpha + city.beta - prior_.alpha - prior_.beta));
}

void TornadoDomain::check_city_count(const Belief& belief) const {
  if (static_cast<int>(belief.cities.size()) != num_cities()) {
    throw ConstraintError("tornado belief has " + std::to_string(belief.cities.size()) +
                          " cities, domain expects " + std::to_string(num_cities()));
  }
}

void TornadoDomain::validate(const Belief& belief) const {
  check_city_count(belief);
  for (const auto& city : belief.cities) {
    if (!(city.alpha > 0.0) || !(city.beta > 0.0)) throw ConstraintError("city parameters must be > 0");
  }
  if (belief.sims_remaining < 0) throw ConstraintError("negative simulation budget");
}

std::uint64_t TornadoDomain::stable_hash(const Belief& belief) const {
  StableHasher hasher;
  for (const auto& city : belief.cities) hasher.add(city.alpha).add(city.beta);
  return hasher.add(static_cast<std::uint64_t>(belief.sims_remaining)).digest();
}

BeliefKey TornadoDomain::canonical_key(const Belief& belief) const {
  check_city_count(belief);
  if (num_cities() > kMaxKeyCities) throw ResourceLimitError("too many cities for a canonical key");
  std::array<std::uint64_t, kMaxKeyCities> codes{};
  for (std::size_t i = 0; i < belief.cities.size(); ++i) {
    const auto pos = std::lround(belief.cities[i].alpha - prior_.alpha);
    const auto neg = std::lround(belief.cities[i].beta - prior_.beta);
    if (pos < 0 || neg < 0) throw ConfigError("city parameters below the prior");
    codes[i] = (static_cast<std::uint64_t>(pos) << kCountBits) | static_cast<std::uint64_t>(neg);
  }
  std::sort(codes.begin(), codes.begin() + num_cities());
  KeyPacker packer;
  packer.put(static_cast<std::uint64_t>(belief.sims_remaining), kCountBits);
  for (int i = 0; i < num_cities(); ++i) packer.put(codes[static_cast<std::size_t>(i)], 2 * kCountBits);
  return packer.key();
}

std::string TornadoDomain::describe_key(const BeliefKey& key) const {
  KeyReader reader(key);
  const auto remaining = reader.get(kCountBits);
  std::string out;
  for (int i = 0; i < num_cities(); ++i) {
    const auto code = reader.get(2 * kCountBits);
    if (i > 0) out += '|';
    out += "+" + std::to_string(code >> kCountBits) + "-" + std::to_string(code & ((1U << kCountBits) - 1));
  }
  return out + "|r=" + std::to_string(remaining);
}

}  // namespace metareason

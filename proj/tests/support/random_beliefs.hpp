#pragma once

// Random reachable-looking beliefs for property checks.

#include "metareason/domains/bandit.hpp"
#include "metareason/domains/stopping.hpp"
#include "metareason/domains/tornado.hpp"
#include "metareason/domains/tree.hpp"
#include "metareason/random.hpp"

namespace oracle {

inline int draw(metareason::Rng& rng, int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

inline metareason::StoppingBelief random_stopping(const metareason::StoppingDomain& d, metareason::Rng& rng) {
  const int last = d.spec().horizon - 1;
  const int step = draw(rng, last);
  const int heads = draw(rng, step + 1);
  return {1.0 + heads, 1.0 + (step - heads), step, false};
}

inline metareason::BanditBelief random_bandit(const metareason::BanditDomain& d, metareason::Rng& rng) {
  auto b = d.initial_belief();
  const int step = draw(rng, d.spec().horizon - 1);
  b.step = step;
  for (int i = 0; i < step; ++i) {
    auto& arm = b.arms[static_cast<std::size_t>(draw(rng, d.spec().num_computations))];
    (draw(rng, 2) ? arm.alpha : arm.beta) += 1.0;
  }
  return b;
}

inline metareason::TreeBelief random_tree(const metareason::TreeDomain& d, metareason::Rng& rng) {
  auto b = d.initial_belief();
  const int percent = draw(rng, 101);
  int revealed = 0;
  for (auto& v : b.values) {
    if (draw(rng, 100) < percent) {
      v = draw(rng, 2) ? 1 : -1;
      ++revealed;
    }
  }
  b.step = std::min(revealed, d.spec().horizon - 2);
  return b;
}

inline metareason::TornadoBelief random_tornado(const metareason::TornadoDomain& d, metareason::Rng& rng) {
  auto b = d.initial_belief();
  const int used = draw(rng, d.spec().horizon);
  for (int i = 0; i < used; ++i) {
    auto& city = b.cities[static_cast<std::size_t>(draw(rng, d.spec().num_computations))];
    (draw(rng, 4) == 0 ? city.alpha : city.beta) += 1.0;
  }
  b.step = used;
  b.sims_remaining -= used;
  return b;
}

}  // namespace oracle

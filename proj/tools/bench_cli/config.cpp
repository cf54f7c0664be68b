#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "metareason/error.hpp"
#include "metareason/random.hpp"

namespace bench {

using metareason::ConfigError;
using metareason::DomainKind;
using nlohmann::json;

namespace {

void reject_unknown(const json& object, const std::set<std::string>& known, const std::string& where) {
  if (!object.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& object, const char* key, T& target) {
  if (object.contains(key)) target = object.at(key).get<T>();
}

std::string search_mode_name(metareason::SearchMode mode) {
  return mode == metareason::SearchMode::kBayesian ? "bayesian" : "quasi_random";
}

metareason::SearchMode parse_search_mode(const std::string& name) {
  if (name == "bayesian") return metareason::SearchMode::kBayesian;
  if (name == "quasi_random") return metareason::SearchMode::kQuasiRandom;
  throw ConfigError("unknown search mode '" + name + "'");
}

}  // namespace

metareason::StoppingScale ExperimentConfig::scale() const {
  if (stopping_scale == "signed") return metareason::StoppingScale::kSigned;
  if (stopping_scale == "probability") return metareason::StoppingScale::kProbability;
  throw ConfigError("stopping_scale must be 'signed' or 'probability'");
}

std::vector<double> default_costs(DomainKind domain) {
  switch (domain) {
    case DomainKind::kStopping:
      return {0.001, 0.0015, 0.0025, 0.004, 0.006, 0.008, 0.01, 0.015, 0.02, 0.03, 0.04, 0.05, 0.07, 0.1, 0.15};
    case DomainKind::kBandit:
      return {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    case DomainKind::kTree: {
      std::vector<double> costs;
      for (int e = -7; e <= 0; ++e) costs.push_back(std::ldexp(1.0, e));
      return costs;
    }
    case DomainKind::kTornado:
      return {0.0};
  }
  return {};
}

std::vector<int> default_sizes(DomainKind domain) {
  switch (domain) {
    case DomainKind::kStopping:
      return {0};
    case DomainKind::kBandit:
      return {2, 3, 4, 5};
    case DomainKind::kTree:
      return {2, 3, 4, 5, 6};
    case DomainKind::kTornado:
      return {20};
  }
  return {};
}

void ExperimentConfig::resolve() {
  const auto kind = domain_kind();
  (void)scale();
  if (sizes.empty()) sizes = default_sizes(kind);
  if (costs.empty()) costs = default_costs(kind);
  if (kind == DomainKind::kTornado && budget == 0) budget = 50;
  if (policies.empty()) {
    switch (kind) {
      case DomainKind::kStopping:
        policies = {"optimal", "bmps", "meta_greedy", "full"};
        break;
      case DomainKind::kBandit:
        policies = {"optimal", "bmps", "blinkered", "meta_greedy", "full"};
        break;
      case DomainKind::kTree:
        policies = {"optimal", "bmps", "recursive_blinkered", "meta_greedy", "full"};
        break;
      case DomainKind::kTornado:
        policies = {"bmps", "uniform", "meta_greedy"};
        break;
    }
  }
  if (episodes == 0) episodes = search.test_episodes;
  if (episodes < 1) throw ConfigError("episodes must be positive");
  if (jobs < 1) throw ConfigError("jobs must be positive");
  if (weights_dir.empty()) weights_dir = out / "weights";
  if (tornado.weights.empty()) {
    tornado.weights = weights_dir / weights_file_name({DomainKind::kTornado, 20, 0.0, 0, 50});
  }
  for (const auto& p : policies) (void)metareason::parse_policy(p);
  search.validate();
  features.validate();
}

std::vector<metareason::CellSpec> ExperimentConfig::cells() const {
  std::vector<metareason::CellSpec> out_cells;
  for (int size : sizes) {
    for (double cost : costs) {
      out_cells.push_back({domain_kind(), size, cost, horizon, budget, scale()});
    }
  }
  return out_cells;
}

std::vector<metareason::PolicyKind> ExperimentConfig::policy_kinds() const {
  std::vector<metareason::PolicyKind> kinds;
  for (const auto& p : policies) kinds.push_back(metareason::parse_policy(p));
  return kinds;
}

json ExperimentConfig::to_json() const {
  json j;
  j["domain"] = domain;
  j["sizes"] = sizes;
  j["costs"] = costs;
  j["horizon"] = horizon;
  j["budget"] = budget;
  j["stopping_scale"] = stopping_scale;
  j["policies"] = policies;
  j["episodes"] = episodes;
  j["seed"] = seed;
  j["state_cap"] = state_cap;
  j["search"] = {{"iterations", search.iterations},
                 {"episodes_per_eval", search.episodes_per_eval},
                 {"top_k_rescore", search.top_k_rescore},
                 {"rescore_episodes", search.rescore_episodes},
                 {"test_episodes", search.test_episodes},
                 {"initial_points", search.initial_points},
                 {"acquisition_candidates", search.acquisition_candidates},
                 {"mode", search_mode_name(search.mode)}};
  j["features"] = {{"method", features.method == metareason::FeatureMethod::kExact ? "exact" : "monte_carlo"},
                   {"mc_samples", features.mc_samples},
                   {"quadrature_points", features.quadrature_points},
                   {"common_random_numbers", features.common_random_numbers},
                   {"seed", features.seed}};
  j["tornado"] = {{"total_time", tornado.total_time},
                  {"sim_durations", tornado.sim_durations},
                  {"cities", tornado.cities},
                  {"metareason_time", tornado.metareason_time ? json(*tornado.metareason_time) : json("measured")},
                  {"measure_calls", tornado.measure_calls},
                  {"rollouts", tornado.rollouts}};
  j["regression"] = {{"costs", regression.costs},
                     {"horizon", regression.horizon},
                     {"scatter_cost", regression.scatter_cost}};
  return j;
}

std::string ExperimentConfig::hash() const {
  const auto digest = metareason::StableHasher{}.add(to_json().dump()).digest();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

void apply_preset(ExperimentConfig& config, const std::string& preset) {
  if (preset.empty()) return;
  if (preset != "paper") throw ConfigError("unknown preset '" + preset + "' (expected 'paper')");
  config.preset = preset;
  config.search = metareason::SearchSpec::paper_preset(config.domain);
  config.episodes = config.search.test_episodes;
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw metareason::MissingArtifactError("config file not found: " + path.string());
  try {
    auto j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    if (!j.is_object()) throw ConfigError(path.string() + ": top level must be an object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_config_json(ExperimentConfig& config, const json& j) {
  try {
    reject_unknown(j,
                   {"domain", "sizes", "costs", "horizon", "budget", "stopping_scale", "policies", "episodes",
                    "seed", "preset", "search", "features", "state_cap", "tornado", "regression", "jobs", "out",
                    "weights_dir"},
                   "config");
    read(j, "domain", config.domain);
    read(j, "sizes", config.sizes);
    read(j, "costs", config.costs);
    read(j, "horizon", config.horizon);
    read(j, "budget", config.budget);
    read(j, "stopping_scale", config.stopping_scale);
    read(j, "policies", config.policies);
    read(j, "episodes", config.episodes);
    read(j, "seed", config.seed);
    read(j, "state_cap", config.state_cap);
    read(j, "jobs", config.jobs);
    if (j.contains("out")) config.out = j.at("out").get<std::string>();
    if (j.contains("weights_dir")) config.weights_dir = j.at("weights_dir").get<std::string>();
    if (j.contains("search")) {
      const auto& s = j.at("search");
      reject_unknown(s,
                     {"iterations", "episodes_per_eval", "top_k_rescore", "rescore_episodes", "test_episodes",
                      "initial_points", "acquisition_candidates", "mode"},
                     "search");
      read(s, "iterations", config.search.iterations);
      read(s, "episodes_per_eval", config.search.episodes_per_eval);
      read(s, "top_k_rescore", config.search.top_k_rescore);
      read(s, "rescore_episodes", config.search.rescore_episodes);
      read(s, "test_episodes", config.search.test_episodes);
      read(s, "initial_points", config.search.initial_points);
      read(s, "acquisition_candidates", config.search.acquisition_candidates);
      if (s.contains("mode")) config.search.mode = parse_search_mode(s.at("mode").get<std::string>());
    }
    if (j.contains("features")) {
      const auto& f = j.at("features");
      reject_unknown(f, {"method", "mc_samples", "quadrature_points", "common_random_numbers", "seed"}, "features");
      if (f.contains("method")) {
        const auto m = f.at("method").get<std::string>();
        if (m == "exact") {
          config.features.method = metareason::FeatureMethod::kExact;
        } else if (m == "monte_carlo") {
          config.features.method = metareason::FeatureMethod::kMonteCarlo;
        } else {
          throw ConfigError("features.method must be 'exact' or 'monte_carlo'");
        }
      }
      read(f, "mc_samples", config.features.mc_samples);
      read(f, "quadrature_points", config.features.quadrature_points);
      read(f, "common_random_numbers", config.features.common_random_numbers);
      read(f, "seed", config.features.seed);
    }
    if (j.contains("tornado")) {
      const auto& t = j.at("tornado");
      reject_unknown(t,
                     {"total_time", "sim_durations", "cities", "metareason_time", "measure_calls", "rollouts",
                      "weights"},
                     "tornado");
      read(t, "total_time", config.tornado.total_time);
      read(t, "sim_durations", config.tornado.sim_durations);
      read(t, "cities", config.tornado.cities);
      if (t.contains("metareason_time")) {
        const auto& m = t.at("metareason_time");
        if (m.is_string() && m.get<std::string>() == "measured") {
          config.tornado.metareason_time.reset();
        } else {
          config.tornado.metareason_time = m.get<double>();
        }
      }
      read(t, "measure_calls", config.tornado.measure_calls);
      read(t, "rollouts", config.tornado.rollouts);
      if (t.contains("weights")) config.tornado.weights = t.at("weights").get<std::string>();
    }
    if (j.contains("regression")) {
      const auto& r = j.at("regression");
      reject_unknown(r, {"costs", "horizon", "scatter_cost"}, "regression");
      read(r, "costs", config.regression.costs);
      read(r, "horizon", config.regression.horizon);
      read(r, "scatter_cost", config.regression.scatter_cost);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string weights_file_name(const metareason::CellSpec& cell) {
  char buf[128];
  const int size = cell.domain == DomainKind::kStopping ? metareason::cell_horizon(cell) : cell.size;
  if (cell.domain == DomainKind::kTornado) {
    std::snprintf(buf, sizeof buf, "tornado-%d-b%d.weights", size, cell.budget);
  } else {
    std::snprintf(buf, sizeof buf, "%s-%d-%.6g.weights", metareason::domain_name(cell.domain).c_str(), size,
                  cell.cost);
  }
  return buf;
}

}  // namespace bench

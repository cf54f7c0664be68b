#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metareason/experiment.hpp"

namespace bench {

struct TornadoSettings {
  double total_time = 24.0;
  std::vector<double> sim_durations{0.25, 0.5, 1, 2, 4, 8, 16};
  std::vector<int> cities{10, 30};
  std::optional<double> metareason_time;  // hours; measured when unset
  int measure_calls = 100;
  int rollouts = 5000;
  std::filesystem::path weights;  // defaults to the k=20, budget=50 record
};

struct RegressionSettings {
  std::vector<double> costs{0.001, 0.0025, 0.005, 0.01, 0.02, 0.05, 0.1};
  int horizon = 30;
  double scatter_cost = 0.02;
};

/// Resolved experiment configuration. Precedence: built-in defaults, then
/// --preset, then the config file, then command-line flags.
struct ExperimentConfig {
  std::string domain = "bandit";
  std::vector<int> sizes;  // arms, tree heights or cities
  std::vector<double> costs;
  int horizon = 0;
  int budget = 0;  // tornado simulations
  std::string stopping_scale = "signed";
  std::vector<std::string> policies;
  int episodes = 0;
  std::uint64_t seed = 1;
  std::string preset;
  metareason::SearchSpec search;
  metareason::FeatureConfig features;
  std::size_t state_cap = metareason::kDefaultStateCap;
  TornadoSettings tornado;
  RegressionSettings regression;

  // Run settings that do not change any number in the output.
  int jobs = 1;
  std::filesystem::path out = "results";
  std::filesystem::path weights_dir;

  metareason::DomainKind domain_kind() const { return metareason::parse_domain(domain); }
  metareason::StoppingScale scale() const;
  std::vector<metareason::CellSpec> cells() const;
  std::vector<metareason::PolicyKind> policy_kinds() const;

  /// Everything that influences results, as canonical JSON.
  nlohmann::json to_json() const;
  std::string hash() const;  // 16 hex digits of the canonical JSON

  /// Fill unset grids, policies and episode counts from the domain defaults.
  void resolve();
};

/// Parse a JSON config file (comments allowed).
nlohmann::json load_config_file(const std::filesystem::path& path);
/// Apply config keys on top of `config`; unknown keys are rejected. The
/// "preset" key is read by the caller, before any other key is applied.
void apply_config_json(ExperimentConfig& config, const nlohmann::json& j);
/// Replace the search protocol and episode count with a named preset.
void apply_preset(ExperimentConfig& config, const std::string& preset);

/// Default experiment grids per domain.
std::vector<double> default_costs(metareason::DomainKind domain);
std::vector<int> default_sizes(metareason::DomainKind domain);

/// File name of the weights record for one cell.
std::string weights_file_name(const metareason::CellSpec& cell);

}  // namespace bench

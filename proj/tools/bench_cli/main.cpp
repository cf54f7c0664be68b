// metareason-bench: experiment harness for the metareasoning toolkit.
//
// Exit codes: 0 ok, 2 config, 3 io, 4 missing artifact, 5 resource limit,
// 1 anything else. Failures print one line "error: <category>: <message>".

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <map>
#include <optional>

#include "commands.hpp"
#include "metareason/error.hpp"

namespace {

using metareason::ErrorCategory;

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig:
    case ErrorCategory::kConstraint:
      return 2;
    case ErrorCategory::kIo:
      return 3;
    case ErrorCategory::kMissingArtifact:
      return 4;
    case ErrorCategory::kResourceLimit:
      return 5;
    default:
      return 1;
  }
}

int fail(std::string_view category, const std::string& message, int code) {
  std::fprintf(stderr, "error: %.*s: %s\n", static_cast<int>(category.size()), category.data(), message.c_str());
  return code;
}

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::string preset;
  std::optional<std::string> domain;
  std::vector<int> sizes;
  std::vector<double> costs;
  std::optional<int> budget;
  std::optional<int> horizon;
  std::vector<std::string> policies;
  std::optional<int> episodes;
  std::optional<std::string> weights_dir;
  std::optional<std::string> tornado_weights;
  std::optional<double> metareason_time;
  std::optional<std::string> stopping_scale;
};

void add_common_options(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config_path, "JSON experiment config");
  app.add_option("--seed", f.seed, "run seed");
  app.add_option("--jobs", f.jobs, "worker threads for independent cells");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--preset", f.preset, "search and episode protocol")->check(CLI::IsMember({"paper"}));
  app.add_option("--domain", f.domain, "stopping, bandit, tree or tornado");
  app.add_option("--k,--size,--height", f.sizes, "arm counts, tree heights or city counts")->delimiter(',');
  app.add_option("--cost", f.costs, "computation costs")->delimiter(',');
  app.add_option("--budget", f.budget, "tornado simulation budget");
  app.add_option("--horizon", f.horizon, "metalevel horizon (0 = domain default)");
  app.add_option("--policies", f.policies, "policies to evaluate")->delimiter(',');
  app.add_option("--episodes", f.episodes, "test episodes per cell");
  app.add_option("--weights-dir", f.weights_dir, "directory of trained weights records");
  app.add_option("--weights", f.tornado_weights, "weights record for the tornado sweep");
  app.add_option("--t-mr", f.metareason_time, "pinned metareasoning time per decision, hours");
  app.add_option("--stopping-scale", f.stopping_scale, "signed or probability");
}

bench::ExperimentConfig resolve_config(const Flags& f, const std::string& command) {
  bench::ExperimentConfig config;
  nlohmann::json file;
  if (!f.config_path.empty()) file = bench::load_config_file(f.config_path);
  if (file.contains("domain")) config.domain = file.at("domain").get<std::string>();
  if (f.domain) config.domain = *f.domain;
  if (command == "regress") config.domain = "stopping";
  (void)config.domain_kind();

  std::string preset = f.preset;
  if (preset.empty() && file.contains("preset")) preset = file.at("preset").get<std::string>();
  bench::apply_preset(config, preset);
  if (!file.is_null()) bench::apply_config_json(config, file);
  if (f.domain) config.domain = *f.domain;
  if (command == "regress") config.domain = "stopping";

  if (f.seed) config.seed = *f.seed;
  if (f.jobs) config.jobs = *f.jobs;
  if (f.out) config.out = *f.out;
  if (!f.sizes.empty()) config.sizes = f.sizes;
  if (!f.costs.empty()) config.costs = f.costs;
  if (f.budget) config.budget = *f.budget;
  if (f.horizon) config.horizon = *f.horizon;
  if (!f.policies.empty()) config.policies = f.policies;
  if (f.episodes) config.episodes = *f.episodes;
  if (f.weights_dir) config.weights_dir = *f.weights_dir;
  if (f.tornado_weights) config.tornado.weights = *f.tornado_weights;
  if (f.metareason_time) config.tornado.metareason_time = *f.metareason_time;
  if (f.stopping_scale) config.stopping_scale = *f.stopping_scale;

  // Optimal policies only exist for small trees; solve defaults to those.
  if (command == "solve" && config.sizes.empty() && config.domain_kind() == metareason::DomainKind::kTree) {
    config.sizes = {2, 3};
  }
  config.resolve();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metareason-bench: metareasoning experiment harness"};
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::pair<std::string, std::function<void(const bench::ExperimentConfig&)>>> commands{
      {"train", {"train BMPS weights per cell", bench::cmd_train}},
      {"evaluate", {"evaluate policies per cell", bench::cmd_evaluate}},
      {"tornado", {"tornado timing sweep", bench::cmd_tornado}},
      {"regress", {"stopping VOC regression table", bench::cmd_regress}},
      {"solve", {"backward induction value tables", bench::cmd_solve}},
  };
  for (const auto& [name, entry] : commands) add_common_options(*app.add_subcommand(name, entry.first), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), 2);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto config = resolve_config(flags, command);
    commands.at(command).second(config);
  } catch (const metareason::Error& e) {
    return fail(metareason::category_name(e.category()), e.what(), exit_code(e.category()));
  } catch (const nlohmann::json::exception& e) {
    return fail("config", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}

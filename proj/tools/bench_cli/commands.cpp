#include "commands.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "metareason/error.hpp"
#include "metareason/random.hpp"
#include "metareason/regression.hpp"
#include "metareason/weights_record.hpp"

namespace bench {

using namespace metareason;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

class Csv {
 public:
  Csv(const fs::path& path, const std::string& schema, const std::string& config_hash,
      const std::vector<std::string>& columns)
      : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write " + path.string());
    out_ << "# metareason " << schema << " config_hash=" << config_hash << "\n";
    row(columns);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
    if (!out_) throw IoError("write failed: " + path_.string());
  }

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::ofstream out_;
};

// Runs f(0..n-1) on `jobs` threads. Results must be stored by index so the
// output order never depends on scheduling. The first failure (by index)
// is rethrown.
template <class F>
void parallel_for(std::size_t n, int jobs, F f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int k_or_h(const CellSpec& cell) { return cell.domain == DomainKind::kStopping ? cell_horizon(cell) : cell.size; }

std::string describe(const CellSpec& cell) {
  return domain_name(cell.domain) + " k_or_h=" + std::to_string(k_or_h(cell)) + " cost=" + num(cell.cost);
}

// Search seed of a cell: depends only on the run seed and the cell itself.
std::uint64_t cell_seed(const ExperimentConfig& config, const CellSpec& cell) {
  StableHasher h;
  h.add(domain_name(cell.domain)).add(static_cast<std::uint64_t>(k_or_h(cell))).add(cell.cost);
  h.add(static_cast<std::uint64_t>(cell.budget));
  return mix_seed(config.seed, h.digest());
}

void write_manifest(const ExperimentConfig& config, const std::string& command,
                    const std::vector<fs::path>& outputs, json extra = json::object()) {
  json m;
  m["schema_version"] = 1;
  m["command"] = command;
  m["config"] = config.to_json();
  m["config_hash"] = config.hash();
  m["outputs"] = json::array();
  for (const auto& p : outputs) m["outputs"].push_back(p.filename().string());
  for (auto& [key, value] : extra.items()) m[key] = value;
  const auto path = config.out / "manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << m.dump(2) << "\n";
}

PolicyOptions options_for(const ExperimentConfig& config) {
  PolicyOptions o;
  o.features = config.features;
  o.state_cap = config.state_cap;
  return o;
}

WeightVector load_cell_weights(const ExperimentConfig& config, const CellSpec& cell) {
  const auto path = config.weights_dir / weights_file_name(cell);
  WeightsRecord record;
  try {
    record = read_weights_record(path);
  } catch (const MissingArtifactError&) {
    throw MissingArtifactError("no trained weights for cell " + describe(cell) + " (expected " + path.string() +
                               "; run 'train' first)");
  }
  if (record.domain != domain_name(cell.domain) || record.horizon != cell_horizon(cell)) {
    throw ConfigError("weights record " + path.string() + " does not match cell " + describe(cell));
  }
  return record.weights;
}

}  // namespace

// ---------------------------------------------------------------------------

void cmd_train(const ExperimentConfig& config) {
  ensure_dir(config.out);
  ensure_dir(config.weights_dir);
  const auto cells = config.cells();
  struct Outcome {
    SearchResult search;
    EvalReport test_bmps;
    EvalReport test_greedy;
    std::uint64_t seed = 0;
  };
  std::vector<Outcome> outcomes(cells.size());
  parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
    auto spec = config.search;
    spec.seed = cell_seed(config, cells[i]);
    auto& o = outcomes[i];
    o.seed = spec.seed;
    o.search = train_cell(cells[i], spec, config.features);
    auto options = options_for(config);
    options.weights = o.search.rescored.front().weights;
    o.test_bmps = evaluate_cell(cells[i], PolicyKind::kBmps, options, spec.test_episodes, test_seed(spec.seed));
    o.test_greedy =
        evaluate_cell(cells[i], PolicyKind::kMetaGreedy, options, spec.test_episodes, test_seed(spec.seed));
  });

  const auto hash = config.hash();
  Csv trace(config.out / "train_trace.csv", "train-trace v1", hash,
            {"domain", "k_or_h", "cost", "iteration", "w1", "w2", "w3", "w4", "mean", "se", "best_so_far"});
  Csv summary(config.out / "train_summary.csv", "train-summary v1", hash,
              {"domain", "k_or_h", "cost", "w1", "w2", "w3", "w4", "train_mean", "rescore_mean", "test_bmps",
               "test_meta_greedy", "test_episodes", "seed", "weights_file"});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    const auto& o = outcomes[i];
    const auto d = domain_name(cell.domain);
    for (std::size_t it = 0; it < o.search.trace.size(); ++it) {
      const auto& c = o.search.trace[it];
      trace.row({d, num(k_or_h(cell)), num(cell.cost), num(static_cast<int>(it) + 1), num(c.weights.w1),
                 num(c.weights.w2), num(c.weights.w3), num(c.weights.w4), num(c.mean_return),
                 num(c.standard_error), num(o.search.best_so_far[it])});
    }
    const auto& best = o.search.rescored.front();
    const WeightsRecord record{d, k_or_h(cell), cell_horizon(cell), cell.cost, best.weights, o.seed};
    const auto file = weights_file_name(cell);
    write_weights_record(config.weights_dir / file, record);
    summary.row({d, num(k_or_h(cell)), num(cell.cost), num(best.weights.w1), num(best.weights.w2),
                 num(best.weights.w3), num(best.weights.w4), num(o.search.best_so_far.back()),
                 num(best.mean_return), num(o.test_bmps.mean), num(o.test_greedy.mean), num(o.test_bmps.n),
                 num(o.seed), file});
    std::printf("%s: w=(%.4f, %.4f, %.4f, %.4f) train %.4f test %.4f (meta-greedy %.4f)\n", describe(cell).c_str(),
                best.weights.w1, best.weights.w2, best.weights.w3, best.weights.w4, o.search.best_so_far.back(),
                o.test_bmps.mean, o.test_greedy.mean);
  }
  write_manifest(config, "train", {trace.path(), summary.path()},
                 {{"weights_dir", config.weights_dir.string()}});
}

// ---------------------------------------------------------------------------

void cmd_evaluate(const ExperimentConfig& config) {
  ensure_dir(config.out);
  const auto cells = config.cells();
  const auto policies = config.policy_kinds();
  struct Row {
    PolicyKind policy;
    EvalReport report;
  };
  std::vector<std::vector<Row>> rows(cells.size());
  std::vector<std::string> notes;
  std::vector<std::vector<std::string>> skipped(cells.size());
  const bool needs_weights = std::find(policies.begin(), policies.end(), PolicyKind::kBmps) != policies.end();
  // Load all weights up front so a missing record fails before any work.
  std::vector<WeightVector> weights(cells.size());
  if (needs_weights) {
    for (std::size_t i = 0; i < cells.size(); ++i) weights[i] = load_cell_weights(config, cells[i]);
  }
  parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
    const auto& cell = cells[i];
    auto options = options_for(config);
    options.weights = weights[i];
    const auto seed = test_seed(cell_seed(config, cell));
    for (auto p : policies) {
      try {
        auto r = evaluate_cell(cell, p, options, config.episodes, seed);
        rows[i].push_back({p, scale_report(r, report_scale(cell))});
      } catch (const ResourceLimitError& e) {
        if (p != PolicyKind::kOptimal) throw;
        skipped[i].push_back("optimal skipped for " + describe(cell) + ": " + e.what());
      }
    }
  });
  for (const auto& s : skipped) notes.insert(notes.end(), s.begin(), s.end());

  const auto hash = config.hash();
  Csv results(config.out / "results.csv", "results v1", hash,
              {"domain", "k_or_h", "cost", "policy", "mean", "sd", "ci_lo", "ci_hi", "n", "seed", "config_hash"});
  Csv comparisons(config.out / "comparisons.csv", "comparisons v1", hash,
                  {"domain", "k_or_h", "cost", "policy_a", "policy_b", "mean_diff", "ci_lo", "ci_hi", "n",
                   "config_hash"});
  std::map<std::pair<int, PolicyKind>, std::pair<double, int>> overlap;  // tree aggregate
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    const auto d = domain_name(cell.domain);
    for (const auto& [p, r] : rows[i]) {
      results.row({d, num(k_or_h(cell)), num(cell.cost), policy_name(p), num(r.mean), num(r.sd), num(r.ci_lo),
                   num(r.ci_hi), num(r.n), num(r.seed), hash});
      if (cell.cost >= 1e-4 && cell.cost <= 1e-1) {
        auto& acc = overlap[{cell.size, p}];
        acc.first += r.mean;
        acc.second += 1;
      }
    }
    if (rows[i].size() < 2) continue;
    // Paired comparisons: every policy ran on the same episode seeds.
    auto anchor = std::find_if(rows[i].begin(), rows[i].end(), [](const Row& r) { return r.policy == PolicyKind::kBmps; });
    if (anchor == rows[i].end()) anchor = rows[i].begin();
    for (const auto& other : rows[i]) {
      if (other.policy == anchor->policy) continue;
      const auto c = compare_paired(anchor->report.returns, other.report.returns);
      comparisons.row({d, num(k_or_h(cell)), num(cell.cost), policy_name(anchor->policy), policy_name(other.policy),
                       num(c.mean_diff), num(c.ci_lo), num(c.ci_hi), num(c.n), hash});
    }
  }
  std::vector<fs::path> outputs{results.path(), comparisons.path()};
  if (config.domain_kind() == DomainKind::kTree) {
    Csv aggregate(config.out / "aggregate.csv", "tree-aggregate v1", hash,
                  {"domain", "k_or_h", "policy", "mean_over_costs", "cells", "cost_range", "config_hash"});
    for (const auto& [key, acc] : overlap) {
      aggregate.row({"tree", num(key.first), policy_name(key.second), num(acc.first / acc.second), num(acc.second),
                     "1e-4..1e-1", hash});
    }
    outputs.push_back(aggregate.path());
    notes.push_back(
        "tree height aggregate averages only the grid costs inside [1e-4, 1e-1]; the sweep grid is 2^-7..2^0, "
        "so the two cost ranges differ");
  }
  for (const auto& n : notes) std::fprintf(stderr, "note: %s\n", n.c_str());
  std::printf("wrote %s (%zu cells, %zu policies)\n", results.path().c_str(), cells.size(), policies.size());
  write_manifest(config, "evaluate", outputs, {{"notes", notes}});
}

// ---------------------------------------------------------------------------

void cmd_tornado(const ExperimentConfig& config) {
  ensure_dir(config.out);
  const auto& t = config.tornado;
  const WeightVector weights = read_weights_record(t.weights).weights;
  const auto hash = config.hash();

  std::map<int, double> metareason_time;
  json timing = json::object();
  for (int k : t.cities) {
    metareason_time[k] = t.metareason_time
                             ? *t.metareason_time
                             : measure_metareasoning_hours(k, 50, weights, t.measure_calls, config.features);
    timing[std::to_string(k)] = metareason_time[k];
  }

  struct Job {
    int cities;
    double sim;
  };
  std::vector<Job> jobs;
  for (int k : t.cities) {
    for (double s : t.sim_durations) jobs.push_back({k, s});
  }
  std::vector<TornadoCellResult> results(jobs.size());
  std::vector<std::uint64_t> seeds(jobs.size());
  parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
    seeds[i] = mix_seed(config.seed, StableHasher{}.add(static_cast<std::uint64_t>(jobs[i].cities)).add(jobs[i].sim).digest());
    results[i] = run_tornado_cell(jobs[i].cities, jobs[i].sim, t.total_time, metareason_time[jobs[i].cities], weights,
                                  t.rollouts, seeds[i], config.features);
  });

  Csv out(config.out / "tornado.csv", "tornado v1", hash,
          {"k", "t_sim", "t_mr", "n_sim_bmps", "n_sim_uniform", "bmps_mean", "bmps_ci_lo", "bmps_ci_hi",
           "uniform_mean", "uniform_ci_lo", "uniform_ci_hi", "advantage", "advantage_ci_lo", "advantage_ci_hi", "n",
           "seed", "config_hash"});
  Csv nsim(config.out / "nsim.csv", "tornado-nsim v1", hash,
           {"k", "t_sim", "t_mr", "n_sim_with_metareasoning", "n_sim_without_metareasoning"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& r = results[i];
    out.row({num(r.cities), num(r.sim_duration), num(r.metareason_duration), num(r.n_sim_bmps), num(r.n_sim_uniform),
             num(r.bmps.mean), num(r.bmps.ci_lo), num(r.bmps.ci_hi), num(r.uniform.mean), num(r.uniform.ci_lo),
             num(r.uniform.ci_hi), num(r.advantage.mean_diff), num(r.advantage.ci_lo), num(r.advantage.ci_hi),
             num(r.advantage.n), num(seeds[i]), hash});
    nsim.row({num(r.cities), num(r.sim_duration), num(r.metareason_duration), num(r.n_sim_bmps),
              num(r.n_sim_uniform)});
    std::printf("k=%d t_sim=%g: n_sim %d vs %d, advantage %+.4f [%+.4f, %+.4f]\n", r.cities, r.sim_duration,
                r.n_sim_bmps, r.n_sim_uniform, r.advantage.mean_diff, r.advantage.ci_lo, r.advantage.ci_hi);
  }
  json extra{{"metareason_time_hours", timing}, {"weights", t.weights.string()}};
  if (!t.metareason_time) {
    extra["notes"] = {"t_MR was measured on this machine; pin tornado.metareason_time for byte-identical output"};
  }
  write_manifest(config, "tornado", {out.path(), nsim.path()}, extra);
}

// ---------------------------------------------------------------------------

void cmd_regress(const ExperimentConfig& config) {
  ensure_dir(config.out);
  const auto hash = config.hash();
  const auto& r = config.regression;
  std::vector<VocRegression> fits(r.costs.size());
  parallel_for(r.costs.size(), config.jobs, [&](std::size_t i) { fits[i] = fit_voc_regression(r.costs[i], r.horizon); });

  Csv table(config.out / "regression.csv", "regression v1", hash,
            {"cost", "vpi_coef", "voi1_coef", "cost_coef", "r_squared", "samples", "config_hash"});
  for (const auto& f : fits) {
    table.row({num(f.cost), num(f.vpi_coef), num(f.voi1_coef), num(f.cost_coef), num(f.r_squared),
               num(static_cast<int>(f.samples.size())), hash});
    std::printf("cost %-8g VOC ~ %.3f VPI + %.3f VOI1 %+.3f cost  R2 %.4f\n", f.cost, f.vpi_coef, f.voi1_coef,
                f.cost_coef, f.r_squared);
  }

  const auto scatter_fit = fit_voc_regression(r.scatter_cost, r.horizon);
  Csv scatter(config.out / "regression_scatter.csv", "regression-scatter v1", hash,
              {"cost", "alpha", "beta", "remaining", "vpi", "voi1", "voc", "fitted"});
  std::vector<std::vector<double>> self_design;
  std::vector<double> self_target;
  for (const auto& s : scatter_fit.samples) {
    const double fitted =
        scatter_fit.vpi_coef * s.vpi + scatter_fit.voi1_coef * s.voi1 + scatter_fit.cost_coef * scatter_fit.cost;
    scatter.row({num(scatter_fit.cost), num(s.alpha), num(s.beta), num(s.remaining), num(s.vpi), num(s.voi1),
                 num(s.voc), num(fitted)});
    self_design.push_back({s.voi1});
    self_target.push_back(s.voi1);
  }
  // Sanity check of the fitting code: a feature regressed on itself.
  const double identity = ols(self_design, self_target).r_squared;
  std::printf("identity check: R2 of VOI1 on itself = %.6f\n", identity);
  write_manifest(config, "regress", {table.path(), scatter.path()},
                 {{"identity_r_squared", identity},
                  {"notes", {"utilities on the probability-of-correct-prediction scale"}}});
}

// ---------------------------------------------------------------------------

void cmd_solve(const ExperimentConfig& config) {
  ensure_dir(config.out);
  const auto hash = config.hash();
  const auto cells = config.cells();
  struct Solved {
    double value = 0.0;
    std::size_t states = 0;
    std::string action;
    std::string table;
  };
  std::vector<Solved> solved(cells.size());
  parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
    std::visit(
        [&](const auto& domain) {
          using D = std::decay_t<decltype(domain)>;
          ExactSolver<D> solver(domain, config.state_cap);
          auto& s = solved[i];
          s.value = solver.solve(domain.initial_belief());
          s.action = solver.optimal_action(domain.initial_belief()).to_string();
          s.states = solver.size();
          char name[128];
          std::snprintf(name, sizeof name, "values-%s-%d-%.6g.csv", domain_name(cells[i].domain).c_str(),
                        k_or_h(cells[i]), cells[i].cost);
          s.table = name;
          std::ofstream out(config.out / name);
          if (!out) throw IoError("cannot write " + (config.out / name).string());
          solver.export_csv(out);
          if (!out) throw IoError("write failed: " + (config.out / name).string());
        },
        make_domain(cells[i]));
  });
  Csv summary(config.out / "solve.csv", "solve v1", hash,
              {"domain", "k_or_h", "cost", "value", "normalized_value", "states", "first_action", "table",
               "config_hash"});
  std::vector<fs::path> outputs{summary.path()};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& s = solved[i];
    summary.row({domain_name(cells[i].domain), num(k_or_h(cells[i])), num(cells[i].cost), num(s.value),
                 num(s.value / report_scale(cells[i])), num(static_cast<std::uint64_t>(s.states)), s.action, s.table,
                 hash});
    outputs.push_back(config.out / s.table);
    std::printf("%s: V*(b0) = %.6f over %zu states, first action %s\n", describe(cells[i]).c_str(), s.value, s.states,
                s.action.c_str());
  }
  write_manifest(config, "solve", outputs);
}

}  // namespace bench

#include "metareason/episode.hpp"

namespace metareason {

EvalReport summarize(std::span<const double> values, std::uint64_t seed) {
  EvalReport report;
  report.n = static_cast<int>(values.size());
  report.seed = seed;
  report.returns.assign(values.begin(), values.end());
  if (values.empty()) return report;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  report.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - report.mean) * (v - report.mean);
    report.sd = std::sqrt(ss / (n - 1.0));
  }
  const double half = kZ95 * report.sd / std::sqrt(n);
  report.ci_lo = report.mean - half;
  report.ci_hi = report.mean + half;
  return report;
}

PairedComparison compare_paired(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("paired comparison needs equal-length samples");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const EvalReport r = summarize(diff);
  return {r.mean, r.ci_lo, r.ci_hi, r.n};
}

}  // namespace metareason

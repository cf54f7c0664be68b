#include "metareason/regression.hpp"

#include <Eigen/Dense>

#include "metareason/domains/stopping.hpp"
#include "metareason/error.hpp"
#include "metareason/exact_solver.hpp"
#include "metareason/features.hpp"

namespace metareason {

OlsFit ols(const std::vector<std::vector<double>>& design, const std::vector<double>& target) {
  const auto n = static_cast<Eigen::Index>(design.size());
  if (design.size() != target.size()) throw ConfigError("design and target lengths differ");
  if (n == 0) throw DegenerateDesignError("empty design");
  const auto p = static_cast<Eigen::Index>(design.front().size());
  if (n <= p) throw DegenerateDesignError("need more observations than regressors");
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = design[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != p) throw ConfigError("ragged design matrix");
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = row[static_cast<std::size_t>(j)];
    y(i) = target[static_cast<std::size_t>(i)];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < p) throw DegenerateDesignError("design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  const double sse = (y - x * beta).squaredNorm();
  const double sst = (y.array() - y.mean()).matrix().squaredNorm();
  OlsFit fit;
  fit.coefficients.assign(beta.data(), beta.data() + p);
  fit.r_squared = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : 0.0);
  fit.rows = static_cast<std::size_t>(n);
  return fit;
}

VocRegression fit_voc_regression(double cost, int horizon) {
  const StoppingDomain domain(cost, horizon, StoppingScale::kProbability);
  ExactSolver<StoppingDomain> solver(domain);
  solver.solve(domain.initial_belief());

  VocRegression out;
  out.cost = cost;
  std::vector<std::vector<double>> design;
  std::vector<double> target;
  // Beliefs reachable after n samples are (1 + s, 1 + n - s), at step n.
  for (int n = 0; n + 1 < horizon; ++n) {
    for (int s = 0; s <= n; ++s) {
      const StoppingBelief b{1.0 + s, 1.0 + (n - s), n, false};
      VocSample row{1 + s, 1 + n - s, horizon - 1 - n, vpi(domain, b), voi1(domain, b, 0),
                    exact_voc(solver, b, MetaAction::compute(0))};
      design.push_back({row.vpi, row.voi1, cost});
      target.push_back(row.voc);
      out.samples.push_back(row);
    }
  }
  if (out.samples.size() < 4) throw DegenerateDesignError("fewer than 4 beliefs to regress on");
  const OlsFit fit = ols(design, target);
  out.vpi_coef = fit.coefficients[0];
  out.voi1_coef = fit.coefficients[1];
  out.cost_coef = fit.coefficients[2];
  out.r_squared = fit.r_squared;
  return out;
}

}  // namespace metareason

#include <doctest.h>

#include "metareason/error.hpp"
#include "metareason/regression.hpp"

using namespace metareason;
using doctest::Approx;

TEST_CASE("ols recovers an exact linear model") {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 20; ++i) {
    const double a = i * 0.1;
    const double b = (i % 7) * 0.3;
    x.push_back({a, b, 1.0});
    y.push_back(2 * a - 3 * b + 0.5);
  }
  const auto fit = ols(x, y);
  CHECK(fit.coefficients[0] == Approx(2));
  CHECK(fit.coefficients[1] == Approx(-3));
  CHECK(fit.coefficients[2] == Approx(0.5));
  CHECK(fit.r_squared == Approx(1.0));
  CHECK(fit.rows == 20);
}

TEST_CASE("regressing a feature on itself is a perfect fit") {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) {
    x.push_back({i * 0.37});
    y.push_back(i * 0.37);
  }
  CHECK(ols(x, y).r_squared == Approx(1.0));
}

TEST_CASE("degenerate designs are rejected") {
  CHECK_THROWS_AS(ols({{1, 2}, {2, 4}, {3, 6}}, {1, 2, 3}), DegenerateDesignError);
  CHECK_THROWS_AS(ols({{1}}, {1}), DegenerateDesignError);
  CHECK_THROWS_AS(fit_voc_regression(0.1, 3), DegenerateDesignError);
}

TEST_CASE("stopping VOC regression at high cost is VOI1 minus cost") {
  const auto r = fit_voc_regression(0.1);
  CHECK(r.samples.size() == 435);
  CHECK(r.vpi_coef == Approx(0.0).epsilon(0.05));
  CHECK(r.voi1_coef == Approx(1.0).epsilon(0.05));
  CHECK(r.cost_coef == Approx(-1.0).epsilon(0.05));
  CHECK(r.r_squared >= 0.999);
  const auto above = fit_voc_regression(0.15);
  CHECK(above.voi1_coef == Approx(r.voi1_coef).epsilon(0.01));
}

TEST_CASE("regression fit improves with cost") {
  const auto low = fit_voc_regression(0.001);
  const auto mid = fit_voc_regression(0.01);
  CHECK(low.r_squared > 0.85);
  CHECK(low.r_squared < mid.r_squared);
}

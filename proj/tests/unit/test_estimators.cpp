#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "levysv/errors.hpp"
#include "levysv/estimators.hpp"
#include "levysv/rng.hpp"

using namespace levysv;

namespace {

// Deterministic Pareto(alpha) sample via midpoint quantiles, shuffled so
// prefix-based diagnostics see an exchangeable-looking stream.
std::vector<double> pareto_grid(double alpha, std::size_t n,
                                std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    out[i] = std::pow(1.0 - u, -1.0 / alpha);
  }
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(out[i], out[static_cast<std::size_t>(rng.uniform01() *
                                                   static_cast<double>(i + 1))]);
  return out;
}

}  // namespace

TEST_CASE("empirical moment is the exact sample mean of |x|^q") {
  const std::vector<double> xs = {1.0, -2.0, 3.0, -4.0};
  const auto m1 = empirical_moment(xs, 1.0);
  CHECK(m1.value == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(m1.single_batch);  // 4 samples cannot fill 32 batches
  const auto m2 = empirical_moment(xs, 2.0);
  CHECK(m2.value == doctest::Approx(7.5).epsilon(1e-15));
  CHECK(empirical_moment(xs, 3.0).value ==
        doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("batch standard error is honest on iid data") {
  Rng rng(20260818);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = rng.normal();
  const auto est = empirical_moment(xs, 4.0);
  CHECK_FALSE(est.single_batch);
  CHECK(est.stderr_ > 0.0);
  CHECK(est.stderr_ < 0.2);
  // E Z^4 = 3; allow four standard errors.
  CHECK(std::abs(est.value - 3.0) <= 4.0 * est.stderr_);
}

TEST_CASE("Lq norms are nondecreasing in q") {
  Rng rng(31);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = rng.uniform01() * 3.0 - 1.0;
  double prev = 0.0;
  for (const double q : {1.0, 2.0, 3.0, 4.0}) {
    const double norm = std::pow(empirical_moment(xs, q).value, 1.0 / q);
    CHECK(norm >= prev - 1e-12);
    prev = norm;
  }
}

TEST_CASE("median of means shrugs off a single wild batch") {
  std::vector<double> xs(3200, 1.0);
  xs[100] = 1e9;
  const double mom = median_of_means(xs, 1.0);
  const double mean = empirical_moment(xs, 1.0).value;
  CHECK(mom == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mean > 1000.0);

  // Constant data: every batch mean is the constant.
  const std::vector<double> flat(640, 2.0);
  CHECK(median_of_means(flat, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("hill estimator recovers a pareto index") {
  const auto xs = pareto_grid(2.0, 20000, 7);
  const auto est = hill_estimator(xs, default_hill_k(xs.size()));
  CHECK_FALSE(est.degenerate);
  CHECK(est.tail_index == doctest::Approx(2.0).epsilon(0.08));
  CHECK(est.stderr_ ==
        doctest::Approx(est.tail_index /
                        std::sqrt(static_cast<double>(
                            default_hill_k(xs.size())))).epsilon(1e-12));
}

TEST_CASE("hill estimator edge cases") {
  const std::vector<double> flat(100, 3.0);
  const auto est = hill_estimator(flat, 20);
  CHECK(est.degenerate);

  std::vector<double> xs(100, 1.0);
  CHECK_THROWS(hill_estimator(xs, 5));       // k too small
  CHECK_THROWS(hill_estimator(xs, 100));     // k >= n
  xs[3] = -1.0;
  CHECK_THROWS(hill_estimator(xs, 20));      // nonpositive sample

  CHECK(default_hill_k(1000000) == 10000);
  CHECK(default_hill_k(1000) == 100);
}

TEST_CASE("divergence diagnostic classifies textbook cases") {
  SUBCASE("bounded data is stable") {
    Rng rng(4);
    std::vector<double> xs(20000);
    for (auto& x : xs) x = rng.uniform01();
    CHECK(divergence_diagnostic(xs, 2.0) == DivergenceFlag::Stable);
  }
  SUBCASE("pareto(1) second moment is divergent") {
    const auto xs = pareto_grid(1.0, 40000, 20260818);
    CHECK(divergence_diagnostic(xs, 2.0) == DivergenceFlag::Divergent);
  }
  SUBCASE("pareto(1.5) first moment is heavy but integrable") {
    const auto xs = pareto_grid(1.5, 40000, 11);
    CHECK(divergence_diagnostic(xs, 1.0) == DivergenceFlag::Heavy);
  }
  SUBCASE("gaussian eighth moment is stable") {
    Rng rng(20260818);
    std::vector<double> xs(50000);
    for (auto& x : xs) x = rng.normal();
    CHECK(divergence_diagnostic(xs, 8.0) == DivergenceFlag::Stable);
  }
  SUBCASE("sample-size floor") {
    std::vector<double> xs(5000, 1.0);
    CHECK_THROWS(divergence_diagnostic(xs, 2.0));
  }
}

TEST_CASE("moment table is lag-major with per-lag flags") {
  IncrementTable table;
  table.lags = {0.25, 0.5};
  table.n_paths = 4;
  table.dx = {{1.0, -1.0, 2.0, -2.0}, {3.0, -3.0, 4.0, -4.0}};
  table.ivar = {{1.0, 1.0, 4.0, 4.0}, {9.0, 9.0, 16.0, 16.0}};
  const std::vector<double> qs = {1.0, 2.0};
  const auto mt = build_moment_table(table, qs);
  REQUIRE(mt.rows.size() == 4);
  CHECK(mt.rows[0].lag == 0.25);
  CHECK(mt.rows[0].q == 1.0);
  CHECK(mt.rows[0].moment == doctest::Approx(1.5));
  CHECK(mt.rows[1].lag == 0.25);
  CHECK(mt.rows[1].q == 2.0);
  CHECK(mt.rows[1].moment == doctest::Approx(2.5));
  CHECK(mt.rows[2].lag == 0.5);
  CHECK(mt.rows[2].q == 1.0);
  CHECK(mt.rows[2].moment == doctest::Approx(3.5));
  for (const auto& row : mt.rows) {
    CHECK(row.n_eff == 4);
    CHECK(row.flag == DivergenceFlag::Stable);  // n < 1e4: no diagnostic
  }
}

TEST_CASE("scaling exponent recovers an exact power law") {
  MomentTable mt;
  for (int e = -10; e <= -1; ++e) {
    const double h = std::ldexp(1.0, e);
    MomentRow row;
    row.lag = h;
    row.q = 2.0;
    row.moment = 2.5 * std::pow(h, 1.7);
    row.stderr_ = row.moment * 1e-3;
    row.n_eff = 100000;
    mt.rows.push_back(row);
  }
  const auto fit = scaling_exponent(mt, 2.0);
  CHECK(fit.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.n_lags == 10);
  CHECK(fit.stderr_ < 1e-3);
}

TEST_CASE("scaling exponent falls back to OLS without usable errors") {
  MomentTable mt;
  for (int e = -5; e <= -1; ++e) {
    const double h = std::ldexp(1.0, e);
    MomentRow row;
    row.lag = h;
    row.q = 1.0;
    row.moment = std::pow(h, 0.5);
    row.stderr_ = 0.0;  // forces the uniform-weight route
    mt.rows.push_back(row);
  }
  const auto fit = scaling_exponent(mt, 1.0);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scaling exponent excludes divergent rows and needs four lags") {
  MomentTable mt;
  for (int e = -6; e <= -1; ++e) {
    const double h = std::ldexp(1.0, e);
    MomentRow row;
    row.lag = h;
    row.q = 2.0;
    row.moment = std::pow(h, 1.0);
    row.stderr_ = row.moment * 1e-3;
    row.flag = e >= -3 ? DivergenceFlag::Divergent : DivergenceFlag::Stable;
    mt.rows.push_back(row);
  }
  // 6 lags minus 3 divergent = 3 usable: not enough.
  CHECK_THROWS_AS(scaling_exponent(mt, 2.0), InsufficientDataError);
  mt.rows[5].flag = DivergenceFlag::Stable;  // now 4 usable
  CHECK(scaling_exponent(mt, 2.0).slope == doctest::Approx(1.0).epsilon(1e-12));
  // Unknown q: nothing to fit.
  CHECK_THROWS_AS(scaling_exponent(mt, 3.0), InsufficientDataError);
}

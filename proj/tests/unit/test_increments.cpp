#include <doctest.h>

#include <cmath>
#include <sstream>

#include "levysv/increments.hpp"

using namespace levysv;

namespace {

IncrementTable small_table(std::uint64_t seed, unsigned workers,
                           std::size_t n_paths = 2000) {
  const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 1.0});
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  std::vector<double> lags;
  for (int e = -8; e <= -3; ++e) lags.push_back(std::ldexp(1.0, e));
  return simulate_increments(sub, drift, lags, n_paths, 50.0, seed, workers);
}

}  // namespace

TEST_CASE("increment scales like the square root of integrated variance") {
  Rng a(42);
  Rng b(42);
  const double z = b.normal();
  CHECK(increment(4.0, a) == doctest::Approx(2.0 * z).epsilon(1e-15));

  // Zero variance still consumes one draw, keeping streams aligned.
  Rng c(42);
  Rng d(42);
  CHECK(increment(0.0, c) == 0.0);
  (void)d.normal();
  CHECK(c.normal() == doctest::Approx(d.normal()).epsilon(1e-15));
}

TEST_CASE("table shape and nested integrated variance") {
  const auto table = small_table(20260818, 1);
  REQUIRE(table.lags.size() == 6);
  REQUIRE(table.ivar.size() == 6);
  REQUIRE(table.dx.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    REQUIRE(table.ivar[k].size() == table.n_paths);
    REQUIRE(table.dx[k].size() == table.n_paths);
  }
  for (std::size_t r = 0; r < table.n_paths; ++r) {
    for (std::size_t k = 0; k < 6; ++k) {
      REQUIRE(table.ivar[k][r] >= 0.0);
      if (k > 0) REQUIRE(table.ivar[k][r] >= table.ivar[k - 1][r]);
    }
  }
}

TEST_CASE("worker count never changes the numbers") {
  const auto one = small_table(20260818, 1);
  const auto four = small_table(20260818, 4);
  REQUIRE(one.n_paths == four.n_paths);
  for (std::size_t k = 0; k < one.lags.size(); ++k)
    for (std::size_t r = 0; r < one.n_paths; ++r) {
      REQUIRE(one.ivar[k][r] == four.ivar[k][r]);
      REQUIRE(one.dx[k][r] == four.dx[k][r]);
    }
}

TEST_CASE("different seeds give different tables") {
  const auto a = small_table(1, 2, 100);
  const auto b = small_table(2, 2, 100);
  bool any_diff = false;
  for (std::size_t r = 0; r < a.n_paths && !any_diff; ++r)
    any_diff = a.dx[0][r] != b.dx[0][r];
  CHECK(any_diff);
}

TEST_CASE("lag validation") {
  const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 1.0});
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  CHECK_THROWS(simulate_increments(sub, drift, {}, 10, 10.0, 1, 1));
  CHECK_THROWS(simulate_increments(sub, drift, {0.0, 1.0}, 10, 10.0, 1, 1));
  CHECK_THROWS(simulate_increments(sub, drift, {0.5, 0.25}, 10, 10.0, 1, 1));
  CHECK_THROWS(simulate_increments(sub, drift, {0.25, 0.25}, 10, 10.0, 1, 1));
}

TEST_CASE("martingale consistency: E[dX^2] tracks E[I]") {
  const auto table = small_table(20260818, 2, 20000);
  for (const std::size_t k : {std::size_t{0}, table.lags.size() - 1}) {
    double mean_sq = 0.0;
    double mean_ivar = 0.0;
    for (std::size_t r = 0; r < table.n_paths; ++r) {
      mean_sq += table.dx[k][r] * table.dx[k][r];
      mean_ivar += table.ivar[k][r];
    }
    mean_sq /= static_cast<double>(table.n_paths);
    mean_ivar /= static_cast<double>(table.n_paths);
    CAPTURE(k);
    // Heavy-ish summands: allow 10% at n = 2e4.
    CHECK(mean_sq == doctest::Approx(mean_ivar).epsilon(0.10));
  }
}

TEST_CASE("stationarity: mean integrated variance is linear in the lag") {
  const auto table = small_table(20260818, 2, 20000);
  std::vector<double> means;
  for (std::size_t k = 0; k < table.lags.size(); ++k) {
    double m = 0.0;
    for (std::size_t r = 0; r < table.n_paths; ++r) m += table.ivar[k][r];
    means.push_back(m / static_cast<double>(table.n_paths));
  }
  for (std::size_t k = 1; k < means.size(); ++k) {
    CAPTURE(k);
    CHECK(means[k] / means[k - 1] == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("csv round trip is exact") {
  const auto table = small_table(99, 2, 200);
  std::ostringstream os;
  write_increments_csv(os, table);
  std::istringstream is(os.str());
  const auto back = read_increments_csv(is);
  REQUIRE(back.lags == table.lags);
  REQUIRE(back.n_paths == table.n_paths);
  REQUIRE(back.ivar == table.ivar);
  REQUIRE(back.dx == table.dx);
}

TEST_CASE("csv reader rejects malformed input") {
  {
    std::istringstream is("nope\n1,2,3,4\n");
    CHECK_THROWS(read_increments_csv(is));
  }
  {
    // Drop the last line of a valid table: no longer rectangular.
    const auto table = small_table(99, 1, 3);
    std::ostringstream os;
    write_increments_csv(os, table);
    std::string text = os.str();
    text.erase(text.find_last_of('\n', text.size() - 2) + 1);
    std::istringstream is(text);
    CHECK_THROWS(read_increments_csv(is));
  }
}

TEST_CASE("pooled samples are replica-major absolute increments") {
  const auto table = small_table(5, 1, 50);
  const auto pooled = pooled_abs_increments(table);
  REQUIRE(pooled.size() == table.n_paths * table.lags.size());
  std::size_t i = 0;
  for (std::size_t r = 0; r < table.n_paths; ++r)
    for (std::size_t k = 0; k < table.lags.size(); ++k, ++i)
      REQUIRE(pooled[i] == std::abs(table.dx[k][r]));
}

TEST_CASE("parallel_replicas covers every index exactly once") {
  std::vector<int> hits(1000, 0);
  parallel_replicas(1000, 3, [&](std::size_t i) { hits[i] += 1; });
  for (const int h : hits) REQUIRE(h == 1);

  CHECK_THROWS_AS(parallel_replicas(
                      10, 2,
                      [](std::size_t i) {
                        if (i == 7) throw std::runtime_error("boom");
                      }),
                  std::runtime_error);
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "levysv/errors.hpp"
#include "levysv/volatility.hpp"

using namespace levysv;

namespace {

VolatilityPath sample_fixture(Rng& rng) {
  const SubordinatorSpec sub(0.0, 3.0, ParetoJumps{1.0, 2.0});
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  return simulate_path(sub, drift, 1.5, 4.0, rng);
}

}  // namespace

TEST_CASE("simulated paths have ordered jumps and upward moves") {
  Rng rng(20260818);
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    const auto path = sample_fixture(rng);
    CHECK(path.horizon == 4.0);
    CHECK(path.initial_value == 1.5);
    REQUIRE(path.jump_times.size() == path.post_jump_values.size());
    double prev_t = 0.0;
    double prev_v = path.initial_value;
    for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
      const double t = path.jump_times[i];
      REQUIRE(t > prev_t);
      REQUIRE(t <= path.horizon);
      // The jump adds at least x_min on top of the decayed value.
      const double decayed = flow(prev_v, t - prev_t, drift);
      REQUIRE(path.post_jump_values[i] >= decayed + 1.0 - 1e-12);
      prev_t = t;
      prev_v = path.post_jump_values[i];
    }
  }
}

TEST_CASE("path_value is right-continuous at jumps and decays between") {
  Rng rng(7);
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  const auto path = sample_fixture(rng);
  CHECK(path_value(path, drift, 0.0) == doctest::Approx(1.5));
  for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
    const double t = path.jump_times[i];
    CHECK(path_value(path, drift, t) ==
          doctest::Approx(path.post_jump_values[i]).epsilon(1e-12));
    // Just before the jump the path is still on the previous segment.
    const double before = path_value(path, drift, t - 1e-9);
    CHECK(before < path.post_jump_values[i]);
  }
}

TEST_CASE("integrated variance is additive over subintervals") {
  Rng rng(11);
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  const auto path = sample_fixture(rng);
  const double whole = integrated_variance(path, drift, 0.0, 4.0);
  CHECK(whole > 0.0);
  for (const double mid : {0.3, 1.0, 2.5, 3.9}) {
    const double left = integrated_variance(path, drift, 0.0, mid);
    const double right = integrated_variance(path, drift, mid, 4.0);
    CHECK(left + right == doctest::Approx(whole).epsilon(1e-12));
  }
  // Three-way split across a jump time, if there is one.
  if (!path.jump_times.empty()) {
    const double tj = path.jump_times.front();
    const double a = integrated_variance(path, drift, 0.0, tj);
    const double b = integrated_variance(path, drift, tj, 4.0);
    CHECK(a + b == doctest::Approx(whole).epsilon(1e-12));
  }
}

TEST_CASE("integrated variance equals integrated flow on jump-free paths") {
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  VolatilityPath path;
  path.initial_value = 2.0;
  path.horizon = 3.0;
  const double got = integrated_variance(path, drift, 0.5, 2.5);
  // Marginalize manually: decay to t=0.5, then integrate for 2 units.
  const double v_at_half = flow(2.0, 0.5, drift);
  CHECK(got ==
        doctest::Approx(integrated_flow(v_at_half, 2.0, drift)).epsilon(1e-12));
}

TEST_CASE("integrated variance argument validation") {
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  VolatilityPath path;
  path.initial_value = 1.0;
  path.horizon = 2.0;
  CHECK_THROWS(integrated_variance(path, drift, -0.1, 1.0));
  CHECK_THROWS(integrated_variance(path, drift, 1.0, 1.0));
  CHECK_THROWS(integrated_variance(path, drift, 1.5, 2.5));
}

TEST_CASE("positive inflow paths agree with a fine Riemann sum") {
  // inflow > 0 exercises the ODE route end to end.
  VolatilityPath path;
  path.initial_value = 1.0;
  path.horizon = 1.0;
  path.inflow_rate = 0.5;
  path.jump_times = {0.4};
  path.post_jump_values = {2.0};
  const auto drift = DriftSpec::power_law(1.0, 3.0);

  const int n = 20000;
  double riemann = 0.0;
  for (int i = 0; i < n; ++i)
    riemann += path_value(path, drift, (i + 0.5) / n) / n;
  const double exact = integrated_variance(path, drift, 0.0, 1.0);
  CHECK(exact == doctest::Approx(riemann).epsilon(1e-5));
}

TEST_CASE("stationary sampling requires a valid regime and burn-in") {
  const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 0.4});
  const auto thin = DriftSpec::power_law(1.0, 1.5);  // 0.4 + 1.5 < 2
  Rng rng(3);
  CHECK_THROWS_AS(stationary_sample(sub, thin, 100.0, rng),
                  InvalidRegimeError);

  const SubordinatorSpec ok(0.0, 1.0, ParetoJumps{1.0, 1.0});
  const auto cubic = DriftSpec::power_law(1.0, 3.0);
  CHECK_THROWS(stationary_sample(ok, cubic, 0.0, rng));
  const double v = stationary_sample(ok, cubic, 50.0, rng);
  CHECK(v >= 0.0);
}

TEST_CASE("linear control has the textbook stationary mean") {
  // dV = -V dt + dL with rate-1 jumps of mean 1.5: E V = 1.5.
  const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 3.0});
  const auto lin = DriftSpec::linear(1.0);
  Rng rng(20260818);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += stationary_sample(sub, lin, 60.0, rng);
  CHECK(sum / n == doctest::Approx(1.5).epsilon(0.03));
}

TEST_CASE("burn-in diagnostic separates settled from unsettled") {
  const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 1.0});
  const auto cubic = DriftSpec::power_law(1.0, 3.0);
  Rng rng(20260818);
  const auto settled = burn_in_diagnostic(sub, cubic, 100.0, 2000, rng);
  CHECK(std::abs(settled.z) < 5.0);
  CHECK(settled.p_value > 1e-5);

  // Far too short: half vs full burn-in still on the transient.
  const SubordinatorSpec slow(0.0, 0.05, ParetoJumps{1.0, 3.0});
  const auto lin = DriftSpec::linear(0.05);
  const auto transient = burn_in_diagnostic(slow, lin, 2.0, 2000, rng);
  CHECK(std::abs(transient.z) > 5.0);
  CHECK(transient.p_value < 1e-5);
}

TEST_CASE("path csv has the documented shape") {
  Rng rng(13);
  const auto drift = DriftSpec::power_law(1.0, 3.0);
  const auto path = sample_fixture(rng);
  std::ostringstream os;
  write_path_csv(os, path, drift);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "t,event,V");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == path.jump_times.size() + 2);
}

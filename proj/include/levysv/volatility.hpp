#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "levysv/drift.hpp"
#include "levysv/rng.hpp"
#include "levysv/subordinator.hpp"

namespace levysv {

// Deterministic decay of the variance between jumps: value at time dt of
// v' = -f(v) started from v0. Closed form for power-law and linear drifts,
// adaptive integration otherwise. Nonnegative, nonincreasing in dt, and
// satisfies the semigroup identity flow(v0, s+t) = flow(flow(v0, s), t).
double flow(double v0, double dt, const DriftSpec& drift);

// Integral of the flow over [0, dt]: total variance contributed by one
// jump-free segment. Exact antiderivatives for power-law and linear drifts,
// in cancellation-safe log1p/expm1 form; adaptive integration otherwise.
double integrated_flow(double v0, double dt, const DriftSpec& drift);

// Piecewise-deterministic variance trajectory on [0, horizon]: decay under
// the drift between jump arrivals, upward jumps at them. `inflow_rate` is
// the subordinator's deterministic drift, kept so segments can be
// reconstructed exactly after the fact (positive inflow turns segments into
// v' = inflow - f(v), handled by the adaptive integrator).
struct VolatilityPath {
  double initial_value = 0.0;
  std::vector<double> jump_times;        // strictly increasing, in (0, horizon]
  std::vector<double> post_jump_values;  // value right after each jump
  double horizon = 0.0;
  double inflow_rate = 0.0;
};

VolatilityPath simulate_path(const SubordinatorSpec& sub,
                             const DriftSpec& drift, double v0, double horizon,
                             Rng& rng);

// Right-continuous value of the variance at time t in [0, horizon].
double path_value(const VolatilityPath& path, const DriftSpec& drift,
                  double t);

// Integral of the variance over [t0, t1]; requires 0 <= t0 < t1 <= horizon.
// Additive over adjacent intervals and consistent with integrated_flow on
// jump-free stretches.
double integrated_variance(const VolatilityPath& path, const DriftSpec& drift,
                           double t0, double t1);

// Draw from (an approximation of) the stationary variance law: evolve from 0
// for `burn_in` time units and return the terminal value. Requires the
// tail/drift exponents to satisfy alpha + gamma > 2, else the stationary law
// does not exist and InvalidRegimeError is thrown.
double stationary_sample(const SubordinatorSpec& sub, const DriftSpec& drift,
                         double burn_in, Rng& rng);

struct RankTest {
  double z = 0.0;        // normal-approximation z-score
  double p_value = 1.0;  // two-sided
};

// Burn-in adequacy check: Mann-Whitney rank test between n samples at half
// burn-in and n samples at full burn-in. Small |z| is consistent with the
// half-burn-in draws already being stationary.
RankTest burn_in_diagnostic(const SubordinatorSpec& sub,
                            const DriftSpec& drift, double burn_in,
                            std::size_t n, Rng& rng);

// CSV rows "t,event,V" with event in {start, jump, end}.
void write_path_csv(std::ostream& os, const VolatilityPath& path,
                    const DriftSpec& drift);

}  // namespace levysv

#include "levysv/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "levysv/csv.hpp"
#include "levysv/errors.hpp"
#include "levysv/numerics.hpp"

namespace levysv {

namespace {

constexpr double kOdeRelTol = 1e-10;

void check_flow_args(double v0, double dt) {
  if (!(v0 >= 0.0)) throw std::invalid_argument("v0 must be >= 0");
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be >= 0");
}

// Value at dt of v' = inflow - f(v), closed form where available.
double evolve_value(double v0, double dt, const DriftSpec& drift,
                    double inflow) {
  if (dt == 0.0) return v0;
  if (inflow == 0.0 && drift.kind() != DriftKind::General) {
    if (v0 == 0.0) return 0.0;
    const double c = drift.coefficient();
    const double g = drift.exponent();
    if (drift.linear_growth()) return v0 * std::exp(-c * dt);
    const double w = (g - 1.0) * c * dt * std::pow(v0, g - 1.0);
    return v0 * std::exp(std::log1p(w) / (1.0 - g));
  }
  double y = v0;
  rk45_integrate([&](const double* yy, double* dy) { dy[0] = inflow - drift(yy[0]); },
                 &y, 1, dt, kOdeRelTol, true);
  return y;
}

// Integral over [0, dt] of the same segment dynamics.
double evolve_integral(double v0, double dt, const DriftSpec& drift,
                       double inflow) {
  if (dt == 0.0) return 0.0;
  if (inflow == 0.0 && drift.kind() != DriftKind::General) {
    if (v0 == 0.0) return 0.0;
    const double c = drift.coefficient();
    const double g = drift.exponent();
    if (drift.linear_growth()) return v0 / c * (-std::expm1(-c * dt));
    if (g == 2.0) return std::log1p(c * dt * v0) / c;
    // Antiderivative evaluated as expm1/log1p to avoid cancellation when
    // w = (g-1) C dt v0^(g-1) is small.
    const double w = (g - 1.0) * c * dt * std::pow(v0, g - 1.0);
    const double a = (g - 2.0) / (g - 1.0);
    return std::pow(v0, 2.0 - g) * std::expm1(a * std::log1p(w)) /
           (c * (g - 2.0));
  }
  double y[2] = {v0, 0.0};
  rk45_integrate(
      [&](const double* yy, double* dy) {
        dy[0] = inflow - drift(yy[0]);
        dy[1] = yy[0];
      },
      y, 2, dt, kOdeRelTol, true);
  return y[1];
}

// Index of the segment containing t: 0 means [0, T_1), k means [T_k, T_{k+1}).
std::size_t segment_index(const VolatilityPath& path, double t) {
  const auto it = std::upper_bound(path.jump_times.begin(),
                                   path.jump_times.end(), t);
  return static_cast<std::size_t>(it - path.jump_times.begin());
}

double segment_start(const VolatilityPath& path, std::size_t k) {
  return k == 0 ? 0.0 : path.jump_times[k - 1];
}

double segment_value(const VolatilityPath& path, std::size_t k) {
  return k == 0 ? path.initial_value : path.post_jump_values[k - 1];
}

double segment_end(const VolatilityPath& path, std::size_t k) {
  return k < path.jump_times.size() ? path.jump_times[k] : path.horizon;
}

}  // namespace

double flow(double v0, double dt, const DriftSpec& drift) {
  check_flow_args(v0, dt);
  return evolve_value(v0, dt, drift, 0.0);
}

double integrated_flow(double v0, double dt, const DriftSpec& drift) {
  check_flow_args(v0, dt);
  return evolve_integral(v0, dt, drift, 0.0);
}

VolatilityPath simulate_path(const SubordinatorSpec& sub,
                             const DriftSpec& drift, double v0, double horizon,
                             Rng& rng) {
  if (!(v0 >= 0.0)) throw std::invalid_argument("v0 must be >= 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");

  VolatilityPath path;
  path.initial_value = v0;
  path.horizon = horizon;
  path.inflow_rate = sub.drift();
  path.jump_times = sample_jump_times(sub, horizon, rng);
  path.post_jump_values.reserve(path.jump_times.size());

  double prev_t = 0.0;
  double prev_v = v0;
  for (const double t : path.jump_times) {
    const double before =
        evolve_value(prev_v, t - prev_t, drift, path.inflow_rate);
    prev_v = before + sample_jump(sub, rng);
    prev_t = t;
    path.post_jump_values.push_back(prev_v);
  }
  return path;
}

double path_value(const VolatilityPath& path, const DriftSpec& drift,
                  double t) {
  if (!(t >= 0.0) || t > path.horizon)
    throw std::out_of_range("t outside [0, horizon]");
  const std::size_t k = segment_index(path, t);
  return evolve_value(segment_value(path, k), t - segment_start(path, k),
                      drift, path.inflow_rate);
}

double integrated_variance(const VolatilityPath& path, const DriftSpec& drift,
                           double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 <= path.horizon) || !(t0 < t1))
    throw std::out_of_range("need 0 <= t0 < t1 <= horizon");

  double total = 0.0;
  for (std::size_t k = segment_index(path, t0);
       k <= path.jump_times.size(); ++k) {
    const double seg_a = segment_start(path, k);
    const double seg_b = segment_end(path, k);
    const double a = std::max(seg_a, t0);
    const double b = std::min(seg_b, t1);
    if (b <= a) {
      if (seg_a >= t1) break;
      continue;
    }
    const double v_at_a =
        evolve_value(segment_value(path, k), a - seg_a, drift,
                     path.inflow_rate);
    total += evolve_integral(v_at_a, b - a, drift, path.inflow_rate);
    if (seg_b >= t1) break;
  }
  return total;
}

double stationary_sample(const SubordinatorSpec& sub, const DriftSpec& drift,
                         double burn_in, Rng& rng) {
  if (!(burn_in > 0.0)) throw std::invalid_argument("burn_in must be > 0");
  const double alpha = sub.tail_exponent();
  const double gamma = drift.exponent();
  if (!(alpha + gamma > 2.0))
    throw InvalidRegimeError(
        "no stationary law: need tail_exponent + drift exponent > 2");

  // Jump-to-jump evolution from 0; only the terminal value is needed.
  const double inflow = sub.drift();
  double t = 0.0;
  double v = 0.0;
  if (sub.jump_rate() > 0.0) {
    for (;;) {
      const double gap = rng.exponential(sub.jump_rate());
      if (t + gap >= burn_in) break;
      t += gap;
      v = evolve_value(v, gap, drift, inflow) + sample_jump(sub, rng);
    }
  }
  return evolve_value(v, burn_in - t, drift, inflow);
}

RankTest burn_in_diagnostic(const SubordinatorSpec& sub,
                            const DriftSpec& drift, double burn_in,
                            std::size_t n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("need at least 2 samples per group");
  std::vector<double> merged;
  merged.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    merged.push_back(stationary_sample(sub, drift, 0.5 * burn_in, rng));
  for (std::size_t i = 0; i < n; ++i)
    merged.push_back(stationary_sample(sub, drift, burn_in, rng));

  // Mann-Whitney U via midranks, normal approximation with tie correction.
  const std::size_t total = 2 * n;
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return merged[a] < merged[b]; });

  std::vector<double> rank(total);
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < total) {
    std::size_t j = i;
    while (j + 1 < total && merged[order[j + 1]] == merged[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t idx = i; idx <= j; ++idx) rank[order[idx]] = mid;
    const double ties = static_cast<double>(j - i + 1);
    tie_term += ties * ties * ties - ties;
    i = j + 1;
  }

  double rank_sum_first = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) rank_sum_first += rank[idx];
  const double nd = static_cast<double>(n);
  const double u = rank_sum_first - nd * (nd + 1.0) / 2.0;
  const double mean_u = nd * nd / 2.0;
  const double nt = static_cast<double>(total);
  double var_u = nd * nd / 12.0 * (nt + 1.0 - tie_term / (nt * (nt - 1.0)));
  RankTest result;
  if (var_u <= 0.0) return result;  // all values tied: no evidence either way
  result.z = (u - mean_u) / std::sqrt(var_u);
  result.p_value = std::erfc(std::abs(result.z) / std::sqrt(2.0));
  return result;
}

void write_path_csv(std::ostream& os, const VolatilityPath& path,
                    const DriftSpec& drift) {
  os << "t,event,V\n";
  os << format17(0.0) << ",start," << format17(path.initial_value) << "\n";
  for (std::size_t k = 0; k < path.jump_times.size(); ++k)
    os << format17(path.jump_times[k]) << ",jump,"
       << format17(path.post_jump_values[k]) << "\n";
  os << format17(path.horizon) << ",end,"
     << format17(path_value(path, drift, path.horizon)) << "\n";
}

}  // namespace levysv

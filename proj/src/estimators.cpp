#include "levysv/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "levysv/csv.hpp"
#include "levysv/errors.hpp"

namespace levysv {

namespace {

constexpr std::size_t kDiagnosticMinSamples = 10000;

void check_moment_args(std::span<const double> samples, double q,
                       int n_batches) {
  if (samples.empty()) throw std::invalid_argument("samples must be nonempty");
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  if (n_batches < 2) throw std::invalid_argument("need at least 2 batches");
}

std::vector<double> batch_means(std::span<const double> samples, double q,
                                int n_batches) {
  const std::size_t n = samples.size();
  const std::size_t b = static_cast<std::size_t>(n_batches);
  std::vector<double> means;
  means.reserve(b);
  std::size_t start = 0;
  for (std::size_t i = 0; i < b; ++i) {
    // Sizes differ by at most one.
    const std::size_t end = n * (i + 1) / b;
    double sum = 0.0;
    for (std::size_t j = start; j < end; ++j)
      sum += std::pow(std::abs(samples[j]), q);
    means.push_back(sum / static_cast<double>(end - start));
    start = end;
  }
  return means;
}

}  // namespace

MomentEstimate empirical_moment(std::span<const double> samples, double q,
                                int n_batches) {
  check_moment_args(samples, q, n_batches);
  const std::size_t n = samples.size();

  double sum = 0.0;
  for (const double x : samples) sum += std::pow(std::abs(x), q);
  MomentEstimate out;
  out.value = sum / static_cast<double>(n);

  if (n < static_cast<std::size_t>(n_batches)) {
    // Too few samples to batch: plain CLT standard error, flagged.
    double ss = 0.0;
    for (const double x : samples) {
      const double d = std::pow(std::abs(x), q) - out.value;
      ss += d * d;
    }
    out.stderr_ =
        n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) /
                          static_cast<double>(n))
              : 0.0;
    out.single_batch = true;
    return out;
  }

  const auto means = batch_means(samples, q, n_batches);
  const double b = static_cast<double>(means.size());
  double mean_of_means = 0.0;
  for (const double m : means) mean_of_means += m;
  mean_of_means /= b;
  double ss = 0.0;
  for (const double m : means) {
    const double d = m - mean_of_means;
    ss += d * d;
  }
  out.stderr_ = std::sqrt(ss / (b * (b - 1.0)));
  return out;
}

double median_of_means(std::span<const double> samples, double q,
                       int n_batches) {
  check_moment_args(samples, q, n_batches);
  if (samples.size() < static_cast<std::size_t>(n_batches))
    return empirical_moment(samples, q, n_batches).value;
  auto means = batch_means(samples, q, n_batches);
  std::sort(means.begin(), means.end());
  const std::size_t b = means.size();
  return b % 2 == 1 ? means[b / 2]
                    : 0.5 * (means[b / 2 - 1] + means[b / 2]);
}

std::size_t default_hill_k(std::size_t n) {
  // Nudge before flooring: pow() can land a hair under an exact cube root
  // (1e6 -> 9999.999...), and floor(n^(2/3)) means the mathematical value.
  const double raw = std::pow(static_cast<double>(n), 2.0 / 3.0);
  const auto k = static_cast<std::size_t>(std::floor(raw * (1.0 + 1e-12)));
  return std::max<std::size_t>(k, 10);
}

HillEstimate hill_estimator(std::span<const double> samples, std::size_t k) {
  if (k < 10) throw std::invalid_argument("hill_estimator: need k >= 10");
  if (samples.size() <= k)
    throw std::invalid_argument("hill_estimator: need more than k samples");
  for (const double x : samples)
    if (!(x > 0.0))
      throw std::domain_error("hill_estimator: samples must be > 0");

  std::vector<double> top(samples.begin(), samples.end());
  std::nth_element(top.begin(), top.begin() + k, top.end(),
                   std::greater<double>());
  // top[0..k-1] are the k largest (unordered); top[k] is the (k+1)-th.
  const double threshold = top[k];
  double mean_log_excess = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    mean_log_excess += std::log(top[i] / threshold);
  mean_log_excess /= static_cast<double>(k);

  HillEstimate out;
  if (mean_log_excess <= 0.0) {
    out.tail_index = std::numeric_limits<double>::infinity();
    out.stderr_ = std::numeric_limits<double>::infinity();
    out.degenerate = true;
    return out;
  }
  out.tail_index = 1.0 / mean_log_excess;
  out.stderr_ = out.tail_index / std::sqrt(static_cast<double>(k));
  return out;
}

std::string to_string(DivergenceFlag flag) {
  switch (flag) {
    case DivergenceFlag::Stable:
      return "stable";
    case DivergenceFlag::Heavy:
      return "heavy";
    case DivergenceFlag::Divergent:
      return "divergent";
  }
  return "stable";
}

DivergenceFlag divergence_diagnostic(std::span<const double> samples,
                                     double q) {
  if (samples.size() < kDiagnosticMinSamples)
    throw std::invalid_argument(
        "divergence_diagnostic: need at least 10^4 samples");
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");

  const std::size_t n = samples.size();
  const double est_quarter =
      empirical_moment(samples.subspan(0, n / 4), q).value;
  const double est_half = empirical_moment(samples.subspan(0, n / 2), q).value;
  const double est_full = empirical_moment(samples, q).value;
  // "More than doubles" across any of the nested prefix comparisons. A
  // convergent moment settles, so all three ratios tend to 1; an infinite
  // moment keeps being dragged up by new extremes.
  bool growing = est_half > 2.0 * est_quarter ||
                 est_full > 2.0 * est_half || est_full > 2.0 * est_quarter;
  if (est_quarter == 0.0) growing = est_full > 0.0;

  // Hill index of |x|^q over the strictly positive samples.
  std::vector<double> powered;
  powered.reserve(n);
  for (const double x : samples) {
    const double a = std::abs(x);
    if (a > 0.0) powered.push_back(std::pow(a, q));
  }
  double hill_q = std::numeric_limits<double>::infinity();
  const std::size_t k = default_hill_k(powered.size());
  if (powered.size() > k && k >= 10) {
    const auto hill = hill_estimator(powered, k);
    if (!hill.degenerate) hill_q = hill.tail_index;
  }

  if (growing && hill_q < 1.0) return DivergenceFlag::Divergent;
  if (hill_q >= 1.0 && hill_q < 2.0) return DivergenceFlag::Heavy;
  return DivergenceFlag::Stable;
}

MomentTable build_moment_table(const IncrementTable& table,
                               std::span<const double> q_grid) {
  if (q_grid.empty()) throw std::invalid_argument("q grid must be nonempty");
  MomentTable out;
  out.rows.reserve(table.lags.size() * q_grid.size());
  std::vector<double> abs_dx;
  for (std::size_t k = 0; k < table.lags.size(); ++k) {
    abs_dx.assign(table.dx[k].begin(), table.dx[k].end());
    for (auto& x : abs_dx) x = std::abs(x);
    for (const double q : q_grid) {
      MomentRow row;
      row.lag = table.lags[k];
      row.q = q;
      const auto est = empirical_moment(abs_dx, q);
      row.moment = est.value;
      row.stderr_ = est.stderr_;
      row.n_eff = abs_dx.size();
      row.flag = abs_dx.size() >= kDiagnosticMinSamples
                     ? divergence_diagnostic(abs_dx, q)
                     : DivergenceFlag::Stable;
      out.rows.push_back(row);
    }
  }
  return out;
}

void write_moments_csv(std::ostream& os, const MomentTable& table) {
  os << "lag,q,moment,stderr,n_eff,flag\n";
  for (const auto& row : table.rows)
    os << format17(row.lag) << ',' << format17(row.q) << ','
       << format17(row.moment) << ',' << format17(row.stderr_) << ','
       << format_u64(row.n_eff) << ',' << to_string(row.flag) << '\n';
}

SlopeFit scaling_exponent(const MomentTable& table, double q) {
  std::vector<double> x;  // log lag
  std::vector<double> y;  // log moment
  std::vector<double> se;
  for (const auto& row : table.rows) {
    if (row.q != q) continue;
    if (row.flag == DivergenceFlag::Divergent) continue;
    if (!(row.moment > 0.0) || !std::isfinite(row.moment)) continue;
    x.push_back(std::log(row.lag));
    y.push_back(std::log(row.moment));
    se.push_back(row.stderr_);
  }
  if (x.size() < 4)
    throw InsufficientDataError(
        "scaling_exponent: fewer than 4 usable lags at q=" + format17(q));

  // Delta method: var(log m) ~ (stderr/m)^2. Any missing stderr drops the
  // whole fit to uniform weights; mixing the two regimes would be arbitrary.
  bool weighted = true;
  std::vector<double> w(x.size(), 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rel = se[i] / std::exp(y[i]);
    if (!(rel > 0.0) || !std::isfinite(rel)) {
      weighted = false;
      break;
    }
    w[i] = 1.0 / (rel * rel);
  }
  if (!weighted) std::fill(w.begin(), w.end(), 1.0);

  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0))
    throw InsufficientDataError("scaling_exponent: lags are not distinct");

  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.n_lags = x.size();

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double res = y[i] - ybar - fit.slope * (x[i] - xbar);
    ss_res += w[i] * res * res;
    ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  if (weighted) {
    // Known-variance weighting: var(slope) = 1 / sum w (x - xbar)^2.
    fit.stderr_ = std::sqrt(1.0 / sxx);
  } else {
    const double dof = static_cast<double>(x.size() - 2);
    fit.stderr_ = dof > 0.0 ? std::sqrt(ss_res / dof / sxx) : 0.0;
  }
  return fit;
}

}  // namespace levysv

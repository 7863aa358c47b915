#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "levysv/increments.hpp"

namespace levysv {

struct MomentEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  // Set when there were fewer samples than batches and the batch-based
  // standard error degraded to the plain CLT formula.
  bool single_batch = false;
};

// Mean of |x|^q with a standard error from `n_batches` contiguous batches of
// (near-)equal size. The batch route is robust to the heavy-tailed summands
// this model produces; the estimate itself is always the full-sample mean.
MomentEstimate empirical_moment(std::span<const double> samples, double q,
                                int n_batches = 32);

// Median of the batch means of |x|^q: a robustness companion to
// empirical_moment, reported separately and never silently substituted.
double median_of_means(std::span<const double> samples, double q,
                       int n_batches = 32);

struct HillEstimate {
  double tail_index = 0.0;
  double stderr_ = 0.0;
  bool degenerate = false;  // zero log-spacings: no tail information
};

// Hill tail-index estimator from the top k+1 order statistics:
// 1 / mean(log X_(i) - log X_(k+1)), i = 1..k. Standard error index/sqrt(k).
// Samples must be strictly positive; requires 10 <= k < n.
HillEstimate hill_estimator(std::span<const double> samples, std::size_t k);

// Default order-statistic count used when a caller does not pin k.
std::size_t default_hill_k(std::size_t n);

enum class DivergenceFlag { Stable, Heavy, Divergent };

std::string to_string(DivergenceFlag flag);

// Classifies whether the q-th absolute moment of the sampled law looks
// infinite. Compares empirical_moment on nested prefixes of sizes n/4, n/2,
// n: `Divergent` when the estimate more than doubles across those prefixes
// and the Hill index of |x|^q is below 1; `Heavy` when that Hill index is in
// [1,2); `Stable` otherwise. Needs at least 10^4 samples.
DivergenceFlag divergence_diagnostic(std::span<const double> samples,
                                     double q);

struct MomentRow {
  double lag = 0.0;
  double q = 0.0;
  double moment = 0.0;
  double stderr_ = 0.0;
  std::size_t n_eff = 0;
  DivergenceFlag flag = DivergenceFlag::Stable;
};

// Rows lag-major (all q at the smallest lag first). Per-row flags come from
// the divergence diagnostic on that lag's samples when the count supports it
// (>= 10^4), else Stable.
struct MomentTable {
  std::vector<MomentRow> rows;
};

MomentTable build_moment_table(const IncrementTable& table,
                               std::span<const double> q_grid);

void write_moments_csv(std::ostream& os, const MomentTable& table);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;
  std::size_t n_lags = 0;
};

// Weighted least-squares slope of log(moment) against log(lag) at order q;
// this slope is the empirical scaling exponent. Weights are inverse
// variances of log(moment) by the delta method (stderr/moment)^-2; if any
// row lacks a positive stderr the fit falls back to ordinary least squares.
// Rows flagged Divergent or with nonpositive moment are excluded; fewer than
// 4 usable lags raises InsufficientDataError naming q.
SlopeFit scaling_exponent(const MomentTable& table, double q);

}  // namespace levysv

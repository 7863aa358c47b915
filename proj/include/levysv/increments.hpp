#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "levysv/drift.hpp"
#include "levysv/rng.hpp"
#include "levysv/subordinator.hpp"
#include "levysv/volatility.hpp"

namespace levysv {

// One log-price increment over an interval with integrated variance `ivar`:
// sqrt(ivar) times a standard normal (time-changed Brownian motion).
double increment(double ivar, Rng& rng);

// Column store of simulated increments: entry [k][r] belongs to lag k and
// replica r. For each replica the increments across lags are built from one
// Brownian path evaluated at the nested integrated-variance times, so the
// joint law across lags is preserved, not just the marginals.
struct IncrementTable {
  std::vector<double> lags;  // strictly increasing
  std::size_t n_paths = 0;
  std::vector<std::vector<double>> ivar;
  std::vector<std::vector<double>> dx;
};

// Replica-parallel simulation. Replica r draws a stationary starting value,
// one volatility path over the largest lag, and one Brownian embedding; its
// random stream depends only on (seed, r), so results are identical for any
// worker count.
IncrementTable simulate_increments(const SubordinatorSpec& sub,
                                   const DriftSpec& drift,
                                   std::vector<double> lags,
                                   std::size_t n_paths, double burn_in,
                                   std::uint64_t seed, unsigned workers);

// Rows "replica,lag,I,dX", replica-major (all lags of replica 0 first).
void write_increments_csv(std::ostream& os, const IncrementTable& table);
IncrementTable read_increments_csv(std::istream& is);

// Flattened |dX| in CSV row order (replica-major); the canonical sample
// ordering for the divergence diagnostic on a whole table.
std::vector<double> pooled_abs_increments(const IncrementTable& table);

// Map f(replica_index) over 0..n-1 on `workers` threads with deterministic
// work assignment. Rethrows the first worker exception.
void parallel_replicas(std::size_t n, unsigned workers,
                       const std::function<void(std::size_t)>& f);

}  // namespace levysv

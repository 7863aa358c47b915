#include "levysv/increments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "levysv/csv.hpp"

namespace levysv {

double increment(double ivar, Rng& rng) {
  if (!(ivar >= 0.0)) throw std::invalid_argument("ivar must be >= 0");
  if (ivar == 0.0) {
    rng.normal();  // consume the draw so the stream advances uniformly
    return 0.0;
  }
  return std::sqrt(ivar) * rng.normal();
}

void parallel_replicas(std::size_t n, unsigned workers,
                       const std::function<void(std::size_t)>& f) {
  if (workers == 0) workers = 1;
  if (workers == 1 || n < 2 * workers) {
    for (std::size_t r = 0; r < n; ++r) f(r);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      try {
        for (std::size_t r = lo; r < hi; ++r) f(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

IncrementTable simulate_increments(const SubordinatorSpec& sub,
                                   const DriftSpec& drift,
                                   std::vector<double> lags,
                                   std::size_t n_paths, double burn_in,
                                   std::uint64_t seed, unsigned workers) {
  if (lags.empty()) throw std::invalid_argument("need at least one lag");
  for (std::size_t k = 0; k < lags.size(); ++k) {
    if (!(lags[k] > 0.0)) throw std::invalid_argument("lags must be > 0");
    if (k > 0 && !(lags[k] > lags[k - 1]))
      throw std::invalid_argument("lags must be strictly increasing");
  }
  if (n_paths == 0) throw std::invalid_argument("n_paths must be >= 1");

  IncrementTable table;
  table.lags = std::move(lags);
  table.n_paths = n_paths;
  table.ivar.assign(table.lags.size(), std::vector<double>(n_paths));
  table.dx.assign(table.lags.size(), std::vector<double>(n_paths));

  const double horizon = table.lags.back();
  parallel_replicas(n_paths, workers, [&](std::size_t r) {
    Rng rng = Rng::for_replica(seed, r);
    const double v0 = stationary_sample(sub, drift, burn_in, rng);
    const VolatilityPath path = simulate_path(sub, drift, v0, horizon, rng);

    // Brownian motion sampled at the increasing times I(h_1) <= I(h_2) <= ...
    double prev_ivar = 0.0;
    double prev_x = 0.0;
    for (std::size_t k = 0; k < table.lags.size(); ++k) {
      const double total = integrated_variance(path, drift, 0.0, table.lags[k]);
      const double step = std::max(total - prev_ivar, 0.0);
      const double x = prev_x + increment(step, rng);
      table.ivar[k][r] = total;
      table.dx[k][r] = x;
      prev_ivar = total;
      prev_x = x;
    }
  });
  return table;
}

void write_increments_csv(std::ostream& os, const IncrementTable& table) {
  os << "replica,lag,I,dX\n";
  for (std::size_t r = 0; r < table.n_paths; ++r)
    for (std::size_t k = 0; k < table.lags.size(); ++k)
      os << format_u64(r) << ',' << format17(table.lags[k]) << ','
         << format17(table.ivar[k][r]) << ',' << format17(table.dx[k][r])
         << '\n';
}

IncrementTable read_increments_csv(std::istream& is) {
  const auto rows = read_csv(is);
  if (rows.empty() || rows[0] != std::vector<std::string>{"replica", "lag",
                                                          "I", "dX"})
    throw std::runtime_error("increments csv: bad header");

  IncrementTable table;
  std::size_t k = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 4)
      throw std::runtime_error("increments csv: expected 4 cells per row");
    const auto replica = static_cast<std::size_t>(parse_double(row[0]));
    const double lag = parse_double(row[1]);
    if (replica == 0) {
      table.lags.push_back(lag);
      table.ivar.emplace_back();
      table.dx.emplace_back();
      k = table.lags.size() - 1;
    } else {
      k = static_cast<std::size_t>(
          std::lower_bound(table.lags.begin(), table.lags.end(), lag) -
          table.lags.begin());
      if (k >= table.lags.size() || table.lags[k] != lag)
        throw std::runtime_error("increments csv: unknown lag mid-file");
    }
    if (replica != table.ivar[k].size())
      throw std::runtime_error("increments csv: rows not replica-major");
    table.ivar[k].push_back(parse_double(row[2]));
    table.dx[k].push_back(parse_double(row[3]));
  }
  if (table.lags.empty()) throw std::runtime_error("increments csv: no rows");
  table.n_paths = table.ivar[0].size();
  for (std::size_t j = 0; j < table.lags.size(); ++j)
    if (table.ivar[j].size() != table.n_paths)
      throw std::runtime_error("increments csv: ragged lag columns");
  return table;
}

std::vector<double> pooled_abs_increments(const IncrementTable& table) {
  std::vector<double> pooled;
  pooled.reserve(table.n_paths * table.lags.size());
  for (std::size_t r = 0; r < table.n_paths; ++r)
    for (std::size_t k = 0; k < table.lags.size(); ++k)
      pooled.push_back(std::abs(table.dx[k][r]));
  return pooled;
}

}  // namespace levysv

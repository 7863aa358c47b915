#include "levysv/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "levysv/csv.hpp"
#include "levysv/errors.hpp"
#include "levysv/volatility.hpp"

namespace levysv {

namespace {

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Separate stream family for the stationary tail draws so they never reuse
// replica randomness from the increment stage.
std::uint64_t tail_seed(std::uint64_t seed) {
  std::uint64_t s = seed ^ 0x7461696c5f736565ULL;
  return splitmix64(s);
}

std::vector<double> stationary_tail_samples(const BuiltModel& model,
                                            const ExperimentConfig& cfg,
                                            unsigned workers) {
  std::vector<double> samples(cfg.n_tail_samples);
  const std::uint64_t seed = tail_seed(cfg.seed);
  parallel_replicas(cfg.n_tail_samples, workers, [&](std::size_t r) {
    Rng rng = Rng::for_replica(seed, r);
    samples[r] =
        stationary_sample(model.subordinator, model.drift, cfg.burn_in, rng);
  });
  return samples;
}

}  // namespace

std::vector<ScalingPoint> analyze_increments(
    const IncrementTable& table, const ExperimentConfig& cfg,
    MomentTable* moments_out, std::vector<std::string>* warnings) {
  const BuiltModel model = build_model(cfg);
  const std::vector<double> q_grid = adjusted_q_grid(cfg, warnings);
  MomentTable moments = build_moment_table(table, q_grid);

  // Per-q divergence flag on the pooled samples (CSV row order): the largest
  // lags dominate the pooled tail, which is where an infinite moment shows.
  const std::vector<double> pooled = pooled_abs_increments(table);
  const double alpha = model.subordinator.tail_exponent();

  std::vector<ScalingPoint> points;
  for (const double q : q_grid) {
    ScalingPoint point;
    point.q = q;
    point.theory = theory_for_drift(model.drift, alpha, q);
    point.flag = pooled.size() >= 10000 ? divergence_diagnostic(pooled, q)
                                        : DivergenceFlag::Stable;
    if (point.flag != DivergenceFlag::Divergent) {
      try {
        point.fit = scaling_exponent(moments, q);
      } catch (const InsufficientDataError&) {
        point.fit.reset();
      }
    }
    if (point.fit && point.theory.finite()) {
      const double tol = point.theory.branch == Branch::Diffusive
                             ? cfg.tol_diffusive
                             : cfg.tol_multiscaling;
      point.pass = std::abs(point.fit->slope - point.theory.value) <= tol;
    } else if (!point.theory.finite()) {
      // A divergent moment should be flagged, not fitted.
      point.pass = point.flag == DivergenceFlag::Divergent && !point.fit;
    }
    points.push_back(std::move(point));
  }
  if (moments_out) *moments_out = std::move(moments);
  return points;
}

ExperimentReport run_experiment_in_memory(const ExperimentConfig& cfg,
                                          IncrementTable* increments_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned workers = resolve_workers(cfg.workers);
  const BuiltModel model = build_model(cfg);

  ExperimentReport report;
  report.config_hash = config_hash(cfg);
  report.residual_drift = model.residual_drift;

  IncrementTable table =
      simulate_increments(model.subordinator, model.drift, cfg.lags,
                          cfg.n_paths, cfg.burn_in, cfg.seed, workers);
  report.scaling =
      analyze_increments(table, cfg, &report.moments, &report.warnings);

  const auto tail_samples = stationary_tail_samples(model, cfg, workers);
  std::vector<double> positive;
  positive.reserve(tail_samples.size());
  for (const double v : tail_samples)
    if (v > 0.0) positive.push_back(v);
  report.tail.n = positive.size();
  report.tail.k =
      cfg.hill_k > 0 ? cfg.hill_k : default_hill_k(positive.size());
  const double gamma_eff = model.drift.exponent();
  report.tail.theory =
      model.subordinator.tail_exponent() + gamma_eff - 1.0;
  if (positive.size() > report.tail.k) {
    const auto hill = hill_estimator(positive, report.tail.k);
    report.tail.hill = hill.tail_index;
    report.tail.stderr_ = hill.stderr_;
    report.tail.pass = !hill.degenerate &&
                       std::abs(hill.tail_index - report.tail.theory) <=
                           cfg.tol_tail;
  }

  report.all_pass = report.tail.pass;
  for (const auto& point : report.scaling)
    if (point.pass.has_value() && !point.pass.value())
      report.all_pass = false;

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (increments_out) *increments_out = std::move(table);
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  IncrementTable table;
  ExperimentReport report = run_experiment_in_memory(cfg, &table);

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream os(fs::path(cfg.out_dir) / "increments.csv");
    write_increments_csv(os, table);
  }
  {
    std::ofstream os(fs::path(cfg.out_dir) / "moments.csv");
    write_moments_csv(os, report.moments);
  }
  {
    std::ofstream os(fs::path(cfg.out_dir) / "scaling.csv");
    write_scaling_csv(os, report.scaling);
  }
  {
    std::ofstream os(fs::path(cfg.out_dir) / "report.json");
    os << report_json(cfg, report) << "\n";
  }
  return report;
}

void write_scaling_csv(std::ostream& os,
                       const std::vector<ScalingPoint>& points) {
  os << "q,A_hat,stderr,r2,A_theory,flag\n";
  for (const auto& p : points) {
    os << format17(p.q) << ',';
    if (p.fit)
      os << format17(p.fit->slope) << ',' << format17(p.fit->stderr_) << ','
         << format17(p.fit->r_squared);
    else
      os << ",,";
    os << ',';
    if (p.theory.finite())
      os << format17(p.theory.value);
    else
      os << "-inf";
    os << ',' << to_string(p.flag) << '\n';
  }
}

std::string report_json(const ExperimentConfig& cfg,
                        const ExperimentReport& report) {
  nlohmann::json j;
  j["config_hash"] = report.config_hash;
  j["seed"] = cfg.seed;
  j["n_paths"] = cfg.n_paths;
  j["workers"] = cfg.workers;
  j["residual_drift"] = report.residual_drift;
  j["runtime_seconds"] = report.runtime_seconds;
  j["warnings"] = report.warnings;
  j["all_pass"] = report.all_pass;

  // Flat echo of every config field, keyed section.key.
  nlohmann::json echo;
  echo["subordinator.drift"] = cfg.drift;
  echo["subordinator.jump_rate"] = cfg.jump_rate;
  echo["subordinator.alpha"] = cfg.alpha;
  echo["subordinator.x_min"] = cfg.x_min;
  if (cfg.epsilon) echo["subordinator.epsilon"] = *cfg.epsilon;
  echo["drift.drift_kind"] = cfg.drift_kind;
  echo["drift.C"] = cfg.coefficient;
  if (cfg.drift_kind == "power") echo["drift.gamma"] = cfg.gamma;
  echo["experiment.lags"] = cfg.lags;
  echo["experiment.q_grid"] = cfg.q_grid;
  echo["experiment.n_paths"] = cfg.n_paths;
  echo["experiment.burn_in"] = cfg.burn_in;
  echo["experiment.seed"] = cfg.seed;
  echo["experiment.workers"] = cfg.workers;
  echo["experiment.out_dir"] = cfg.out_dir;
  echo["experiment.n_tail_samples"] = cfg.n_tail_samples;
  echo["experiment.hill_k"] = cfg.hill_k;
  echo["experiment.tol_diffusive"] = cfg.tol_diffusive;
  echo["experiment.tol_multiscaling"] = cfg.tol_multiscaling;
  echo["experiment.tol_tail"] = cfg.tol_tail;
  j["config"] = echo;

  nlohmann::json moments = nlohmann::json::array();
  for (const auto& row : report.moments.rows) {
    nlohmann::json r;
    r["lag"] = row.lag;
    r["q"] = row.q;
    r["moment"] = row.moment;
    r["stderr"] = row.stderr_;
    r["n_eff"] = row.n_eff;
    r["flag"] = to_string(row.flag);
    moments.push_back(std::move(r));
  }
  j["moments"] = std::move(moments);

  nlohmann::json scaling = nlohmann::json::array();
  for (const auto& p : report.scaling) {
    nlohmann::json r;
    r["q"] = p.q;
    if (p.fit) {
      r["A_hat"] = p.fit->slope;
      r["stderr"] = p.fit->stderr_;
      r["r2"] = p.fit->r_squared;
      r["n_lags"] = p.fit->n_lags;
    }
    r["A_theory"] = p.theory.finite() ? nlohmann::json(p.theory.value)
                                      : nlohmann::json("-inf");
    r["branch"] = to_string(p.theory.branch);
    r["flag"] = to_string(p.flag);
    if (p.pass) r["pass"] = *p.pass;
    scaling.push_back(std::move(r));
  }
  j["scaling"] = std::move(scaling);

  nlohmann::json tail;
  tail["hill"] = report.tail.hill;
  tail["stderr"] = report.tail.stderr_;
  tail["k"] = report.tail.k;
  tail["n"] = report.tail.n;
  tail["theory"] = report.tail.theory;
  tail["pass"] = report.tail.pass;
  j["stationary_tail"] = std::move(tail);

  return j.dump(2);
}

}  // namespace levysv

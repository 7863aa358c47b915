#include "levysv/validation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "levysv/config.hpp"
#include "levysv/csv.hpp"
#include "levysv/errors.hpp"
#include "levysv/estimators.hpp"
#include "levysv/experiment.hpp"
#include "levysv/increments.hpp"
#include "levysv/theory.hpp"
#include "levysv/volatility.hpp"

namespace levysv {

namespace {

constexpr std::uint64_t kValidationSeed = 20260818;

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::vector<DriftSpec> semigroup_drifts() {
  std::vector<DriftSpec> drifts;
  drifts.push_back(DriftSpec::power_law(1.0, 1.5));
  drifts.push_back(DriftSpec::power_law(0.7, 2.0));
  drifts.push_back(DriftSpec::power_law(2.0, 3.0));
  drifts.push_back(DriftSpec::linear(1.3));
  drifts.push_back(DriftSpec::general(
      [](double v) { return std::pow(v, 2.5); }, 2.5));
  return drifts;
}

double trapezoid_integrated_flow(double v0, double dt, const DriftSpec& drift,
                                 std::size_t n_points) {
  // Independent route: numeric quadrature of the flow itself.
  const double h = dt / static_cast<double>(n_points - 1);
  double sum = 0.5 * (flow(v0, 0.0, drift) + flow(v0, dt, drift));
  for (std::size_t i = 1; i + 1 < n_points; ++i)
    sum += flow(v0, h * static_cast<double>(i), drift);
  return sum * h;
}

struct McMean {
  double mean = 0.0;
  double se = 0.0;
};

// E[exp(-s L_t)] by direct simulation of the subordinator.
McMean laplace_mc(const SubordinatorSpec& spec, double t, double s,
                  std::size_t n, std::uint64_t seed) {
  double sum = 0.0;
  double sumsq = 0.0;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    double level = spec.drift() * t;
    if (spec.jump_rate() > 0.0) {
      double arrival = rng.exponential(spec.jump_rate());
      while (arrival <= t) {
        level += sample_jump(spec, rng);
        arrival += rng.exponential(spec.jump_rate());
      }
    }
    const double x = std::exp(-s * level);
    sum += x;
    sumsq += x * x;
  }
  McMean out;
  const double nd = static_cast<double>(n);
  out.mean = sum / nd;
  const double var = (sumsq - nd * out.mean * out.mean) / (nd - 1.0);
  out.se = std::sqrt(std::max(var, 0.0) / nd);
  return out;
}

struct ReferenceRun {
  MomentTable moments;
  std::vector<double> pooled;
};

// Dyadic lag grid 2^lo .. 2^hi, one lag per octave.
std::vector<double> octave_lags(int lo, int hi) {
  std::vector<double> lags;
  for (int e = lo; e <= hi; ++e) lags.push_back(std::ldexp(1.0, e));
  return lags;
}

// Geometric lag grid 2^(lo/2) .. 2^(hi/2), two lags per octave.
std::vector<double> half_octave_lags(int lo2, int hi2) {
  std::vector<double> lags;
  for (int e2 = lo2; e2 <= hi2; ++e2)
    lags.push_back(std::pow(2.0, 0.5 * static_cast<double>(e2)));
  return lags;
}

ReferenceRun run_model(const SubordinatorSpec& sub, const DriftSpec& drift,
                       std::size_t n_paths, const std::vector<double>& q_grid,
                       const std::vector<double>& lags, unsigned workers) {
  const IncrementTable table = simulate_increments(
      sub, drift, lags, n_paths, 200.0, kValidationSeed, workers);
  ReferenceRun run;
  run.moments = build_moment_table(table, q_grid);
  run.pooled = pooled_abs_increments(table);
  return run;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- individual checks ------------------------------------------------

CheckResult check_diffusive_branch(const ReferenceRun& run) {
  double max_dev = 0.0;
  std::string detail;
  for (const double q : {1.0, 2.0, 3.0}) {
    const auto fit = scaling_exponent(run.moments, q);
    const double dev = std::abs(fit.slope - 0.5 * q);
    max_dev = std::max(max_dev, dev);
    detail += "A(" + fmt(q, 2) + ")=" + fmt(fit.slope) + " ";
  }
  return {"diffusive branch matches q/2 for q in {1,2,3} (tol 0.05)",
          max_dev <= 0.05, detail + "max dev " + fmt(max_dev)};
}

CheckResult check_multiscaling_branch(const ReferenceRun& run) {
  const auto fit = scaling_exponent(run.moments, 8.0);
  const double target =
      theoretical_exponent(ModelParams(1.0, 3.0), 8.0).value;  // 3.5
  const double dev = std::abs(fit.slope - target);
  const bool pass = dev <= 0.25 && fit.r_squared >= 0.98;
  return {"bent branch at q=8 matches theory (tol 0.25, R^2 >= 0.98)", pass,
          "A(8)=" + fmt(fit.slope) + " target " + fmt(target) + " R^2=" +
              fmt(fit.r_squared, 5)};
}

CheckResult check_decreasing_branch(unsigned workers) {
  const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 1.0});
  const DriftSpec drift = DriftSpec::power_law(1.0, 1.5);
  // Above the kink (q_star = 3 here) the moment is carried by rare events
  // whose per-replica probability scales like lag^3 for this drift exponent:
  // a stationary start, or an in-window jump, in the decade where the
  // variance burst saturates. A lag is only informative once n * lag^3
  // yields hundreds of such events; below that the sample sees the q/2 bulk
  // alone, and mixing such lags into the fit drags the slope to q/2 because
  // their (bulk-only) standard errors look deceptively tight. Hence this
  // check fits over half-octave lags in [2^-3, 2], all event-rich at 10^6
  // replicas, instead of the reference grid used for the gamma = 3 runs.
  const auto run = run_model(sub, drift, 1000000, {3.5},
                             half_octave_lags(-6, 2), workers);

  const auto fit = scaling_exponent(run.moments, 3.5);
  const double target =
      theoretical_exponent(ModelParams(1.0, 1.5), 3.5).value;  // 1.25
  const double dev = std::abs(fit.slope - target);
  const auto flag = divergence_diagnostic(run.pooled, 5.0);
  const bool pass = dev <= 0.25 && flag == DivergenceFlag::Divergent;
  return {"decreasing branch at q=3.5 matches theory (tol 0.25) and q=5 "
          "flags divergent",
          pass,
          "A(3.5)=" + fmt(fit.slope) + " target " + fmt(target) +
              ", q=5 flag " + to_string(flag) + " on " +
              std::to_string(run.pooled.size()) + " samples"};
}

CheckResult check_stationary_tail(unsigned workers) {
  const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 1.0});
  const DriftSpec drift = DriftSpec::power_law(1.0, 3.0);
  const std::size_t n = 1000000;

  std::vector<double> samples(n);
  std::uint64_t s = kValidationSeed ^ 0x7461696cULL;
  const std::uint64_t seed = splitmix64(s);
  parallel_replicas(n, workers, [&](std::size_t r) {
    Rng rng = Rng::for_replica(seed, r);
    samples[r] = stationary_sample(sub, drift, 200.0, rng);
  });
  std::vector<double> positive;
  positive.reserve(n);
  for (const double v : samples)
    if (v > 0.0) positive.push_back(v);

  const auto hill = hill_estimator(positive, default_hill_k(positive.size()));
  const bool pass = hill.tail_index >= 2.7 && hill.tail_index <= 3.3;
  return {"stationary tail index in [2.7, 3.3] on 10^6 draws", pass,
          "hill " + fmt(hill.tail_index) + " +- " + fmt(hill.stderr_) +
              " (theory 3)"};
}

CheckResult check_linear_control(unsigned workers) {
  const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 3.0});
  const DriftSpec drift = DriftSpec::linear(1.0);
  const auto run = run_model(sub, drift, 600000, {1.0, 2.0, 4.0},
                             octave_lags(-12, -3), workers);

  double max_dev = 0.0;
  std::string detail;
  for (const double q : {1.0, 2.0, 4.0}) {
    const auto fit = scaling_exponent(run.moments, q);
    const double dev = std::abs(fit.slope - 0.5 * q);
    max_dev = std::max(max_dev, dev);
    detail += "A(" + fmt(q, 2) + ")=" + fmt(fit.slope) + " ";
  }
  return {"linear-drift control stays on q/2 for q in {1,2,4} (tol 0.07)",
          max_dev <= 0.07, detail + "max dev " + fmt(max_dev)};
}

CheckResult check_exactness(std::size_t laplace_n, std::size_t trap_points) {
  std::string detail;
  bool pass = true;

  // Flow semigroup across all drift kinds.
  double worst_semi = 0.0;
  for (const auto& drift : semigroup_drifts())
    worst_semi = std::max(
        worst_semi,
        flow_semigroup_max_rel_error(
            drift, [](double v0, double dt, const DriftSpec& d) {
              return flow(v0, dt, d);
            }));
  pass = pass && worst_semi <= 1e-9;
  detail += "semigroup " + fmt(worst_semi, 3);

  // Antiderivative against plain quadrature of the flow.
  double worst_trap = 0.0;
  for (const auto& drift : semigroup_drifts()) {
    if (drift.kind() == DriftKind::General) continue;  // covered by agreement
    for (const double v0 : {0.1, 1.0, 10.0})
      for (const double dt : {0.25, 1.0}) {
        const double exact = integrated_flow(v0, dt, drift);
        const double approx = trapezoid_integrated_flow(v0, dt, drift,
                                                        trap_points);
        worst_trap = std::max(worst_trap,
                              std::abs(exact - approx) / std::abs(exact));
      }
  }
  pass = pass && worst_trap <= 1e-6;
  detail += ", antiderivative " + fmt(worst_trap, 3);

  // Laplace exponent against direct subordinator Monte Carlo.
  const SubordinatorSpec spec(1.0, 1.0, ParetoJumps{1.0, 2.0});
  double worst_sigma = 0.0;
  int pair_index = 0;
  for (const auto& [t, s] : {std::pair{0.5, 0.7}, std::pair{1.0, 1.0},
                             std::pair{2.0, 0.3}}) {
    const double predicted = std::exp(-t * laplace_exponent(spec, s));
    const auto mc = laplace_mc(spec, t, s, laplace_n,
                               kValidationSeed + 77 + pair_index++);
    worst_sigma = std::max(worst_sigma, std::abs(mc.mean - predicted) / mc.se);
  }
  pass = pass && worst_sigma <= 4.0;
  detail += ", laplace " + fmt(worst_sigma, 3) + " se";

  // Pareto sampler median.
  const SubordinatorSpec pareto(0.0, 1.0, ParetoJumps{1.0, 1.0});
  Rng rng(kValidationSeed + 99);
  std::vector<double> draws(laplace_n);
  for (auto& d : draws) d = sample_jump(pareto, rng);
  std::nth_element(draws.begin(), draws.begin() + draws.size() / 2,
                   draws.end());
  const double median = draws[draws.size() / 2];
  const double med_dev = std::abs(median - 2.0);
  pass = pass && med_dev <= 0.01;
  detail += ", sampler median dev " + fmt(med_dev, 3);

  return {"exactness: semigroup 1e-9, antiderivative 1e-6, laplace MC 4se, "
          "sampler median 0.01",
          pass, detail};
}

CheckResult check_theory_algebra() {
  bool pass = true;
  std::string detail = "ok";
  Rng rng(kValidationSeed + 7);

  for (int trial = 0; trial < 50 && pass; ++trial) {
    const double alpha = 0.2 + 3.8 * rng.uniform01();
    double gamma = 1.0 + 3.0 * rng.uniform01();
    if (alpha + gamma <= 2.0) gamma = 2.0 - alpha + 0.1 + rng.uniform01();
    const ModelParams params(alpha, gamma);
    const double qs = q_star(params);
    const double qb = blowup_q(params);

    // Branch continuity at q_star, via both closed forms evaluated there.
    const double left = 0.5 * qs;
    const double slope2 = (gamma - 2.0) / (2.0 * (gamma - 1.0));
    const double offset = (alpha + gamma - 1.0) / (gamma - 1.0);
    const double right = slope2 * qs + offset;
    if (std::abs(left - right) > 1e-6 * std::max(1.0, std::abs(left))) {
      pass = false;
      detail = "discontinuity at q_star for alpha=" + fmt(alpha) +
               " gamma=" + fmt(gamma);
      break;
    }

    // Second-branch slope strictly below 1/2.
    if (!(slope2 < 0.5)) {
      pass = false;
      detail = "second branch slope not below 1/2 at gamma=" + fmt(gamma);
      break;
    }

    // q -> A(q)/q nonincreasing on a grid clear of thresholds.
    const double q_hi = std::isfinite(qb) ? qb : 3.0 * qs;
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      const double q =
          1.0 + (q_hi - 1.0) * (static_cast<double>(i) + 0.5) / 100.0;
      if (std::abs(q - qs) < 0.05 || std::abs(q - qb) < 0.05) continue;
      if (q >= qb) break;
      const double a = theoretical_exponent(params, q).value;
      const double ratio = a / q;
      if (ratio > prev_ratio + 1e-12) {
        pass = false;
        detail = "A(q)/q increased at q=" + fmt(q) + " alpha=" + fmt(alpha) +
                 " gamma=" + fmt(gamma);
        break;
      }
      prev_ratio = ratio;
    }
  }
  return {"scaling-law algebra: continuity 1e-6, concavity, branch slope < "
          "1/2 over 50 random parameter pairs",
          pass, detail};
}

CheckResult check_determinism() {
  namespace fs = std::filesystem;
  const fs::path base = "acceptance_tmp";
  fs::remove_all(base);

  ExperimentConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 3.0;
  cfg.n_paths = 2000;
  cfg.n_tail_samples = 5000;
  cfg.workers = 2;
  cfg.seed = kValidationSeed;

  cfg.out_dir = (base / "run1").string();
  run_experiment(cfg);
  cfg.out_dir = (base / "run2").string();
  run_experiment(cfg);

  bool pass = true;
  std::string detail;
  for (const char* name : {"increments.csv", "moments.csv", "scaling.csv"}) {
    const std::string a = slurp(base / "run1" / name);
    const std::string b = slurp(base / "run2" / name);
    const bool same = !a.empty() && a == b;
    pass = pass && same;
    detail += std::string(name) + (same ? " identical; " : " DIFFERS; ");
  }
  fs::remove_all(base);
  return {"identical seed/config/workers give byte-identical CSVs", pass,
          detail};
}

CheckResult check_closed_form_values() {
  bool pass = true;
  std::string detail;

  const auto g3 = DriftSpec::power_law(1.0, 3.0);
  const auto g2 = DriftSpec::power_law(1.0, 2.0);
  const auto g15 = DriftSpec::power_law(1.0, 1.5);
  const auto lin = DriftSpec::linear(1.0);

  struct Case {
    double got;
    double want;
  };
  const Case cases[] = {
      {flow(1.0, 1.0, g2), 0.5},
      {flow(1.0, 1.0, g3), 1.0 / std::sqrt(3.0)},
      {integrated_flow(1.0, 1.0, g3), std::sqrt(3.0) - 1.0},
      {integrated_flow(1.0, 1.0, g15), 2.0 / 3.0},
      {integrated_flow(1.0, 1.0, g2), std::log(2.0)},
      {flow(2.0, 1.0, lin), 2.0 * std::exp(-1.0)},
      {integrated_flow(2.0, 1.0, lin), 2.0 * (1.0 - std::exp(-1.0))},
  };
  double worst = 0.0;
  for (const auto& c : cases)
    worst = std::max(worst, std::abs(c.got - c.want) / std::abs(c.want));
  pass = worst <= 1e-12;
  detail = "worst rel dev " + fmt(worst, 3);
  return {"closed-form flow and antiderivative spot values", pass, detail};
}

CheckResult check_quadrature_vs_atoms() {
  // Atom laws evaluate the Laplace exponent exactly; a Pareto law collapsed
  // onto nearly-constant jumps must approach the same value.
  const SubordinatorSpec atoms(0.5, 2.0,
                               AtomJumps{{1.0, 3.0}, {0.5, 0.5}});
  const double s = 0.8;
  const double exact =
      0.5 * s + 2.0 * (0.5 * (1.0 - std::exp(-s * 1.0)) +
                       0.5 * (1.0 - std::exp(-s * 3.0)));
  const double got = laplace_exponent(atoms, s);
  const double dev = std::abs(got - exact);

  const SubordinatorSpec nearly_const(0.0, 1.0, ParetoJumps{1.0, 200.0});
  const double got2 = laplace_exponent(nearly_const, s);
  // alpha -> inf concentrates jumps at x_min = 1.
  const double approx2 = 1.0 - std::exp(-s);
  const bool pass = dev <= 1e-12 && std::abs(got2 - approx2) <= 1e-2;
  return {"laplace exponent: exact atom sums, quadrature sane limits", pass,
          "atom dev " + fmt(dev, 3) + ", stiff-pareto dev " +
              fmt(std::abs(got2 - approx2), 3)};
}

CheckResult check_tail_mass_regular_variation() {
  const SubordinatorSpec spec(0.0, 2.0, ParetoJumps{1.0, 1.7});
  bool pass = tail_mass(spec, 1.0) == 2.0 && tail_mass(spec, 0.5) == 2.0;
  double worst = 0.0;
  for (double u = 1.0; u < 1e6; u *= 3.7) {
    const double ratio = tail_mass(spec, 2.0 * u) / tail_mass(spec, u);
    worst = std::max(worst, std::abs(ratio - std::pow(2.0, -1.7)));
  }
  pass = pass && worst <= 1e-12;
  return {"jump tail mass is regularly varying with the law's index", pass,
          "worst ratio dev " + fmt(worst, 3)};
}

CheckResult check_in_memory_determinism(unsigned workers) {
  ExperimentConfig cfg;
  cfg.n_paths = 500;
  cfg.n_tail_samples = 2000;
  cfg.workers = workers;
  auto render = [&]() {
    IncrementTable table;
    run_experiment_in_memory(cfg, &table);
    std::ostringstream os;
    write_increments_csv(os, table);
    return os.str();
  };
  const std::string a = render();
  const std::string b = render();
  return {"repeated in-memory runs render identical increment tables",
          a == b, a == b ? "identical" : "tables differ"};
}

}  // namespace

double flow_semigroup_max_rel_error(const DriftSpec& drift,
                                    const FlowFn& flow_fn) {
  const double v0s[] = {0.0, 1e-6, 0.01, 1.0, 10.0, 1000.0};
  const double ts[] = {1e-6, 0.01, 0.5, 3.0};
  double worst = 0.0;
  for (const double v0 : v0s)
    for (const double s : ts)
      for (const double t : ts) {
        const double direct = flow_fn(v0, s + t, drift);
        const double composed = flow_fn(flow_fn(v0, s, drift), t, drift);
        const double denom = std::max({std::abs(direct), std::abs(composed),
                                       1e-300});
        worst = std::max(worst, std::abs(direct - composed) / denom);
      }
  return worst;
}

std::vector<CheckResult> validate_quick(unsigned workers) {
  const unsigned w = resolve_workers(workers);
  std::vector<CheckResult> results;
  results.push_back(check_closed_form_values());

  double worst_semi = 0.0;
  for (const auto& drift : semigroup_drifts())
    worst_semi = std::max(
        worst_semi,
        flow_semigroup_max_rel_error(
            drift, [](double v0, double dt, const DriftSpec& d) {
              return flow(v0, dt, d);
            }));
  results.push_back({"flow semigroup identity (tol 1e-9)", worst_semi <= 1e-9,
                     "worst rel err " + fmt(worst_semi, 3)});

  results.push_back(check_quadrature_vs_atoms());
  results.push_back(check_tail_mass_regular_variation());
  results.push_back(check_theory_algebra());

  // Scaled-down statistical spot checks.
  results.push_back(check_exactness(200000, 100001));
  results.push_back(check_in_memory_determinism(w));
  return results;
}

std::vector<CheckResult> validate_full(unsigned workers) {
  const unsigned w = resolve_workers(workers);
  std::vector<CheckResult> results;
  {
    const SubordinatorSpec sub(0.0, 1.0, ParetoJumps{1.0, 1.0});
    const DriftSpec drift = DriftSpec::power_law(1.0, 3.0);
    const auto reference = run_model(sub, drift, 1000000,
                                     {1.0, 2.0, 3.0, 8.0},
                                     octave_lags(-12, -3), w);
    results.push_back(check_diffusive_branch(reference));
    results.push_back(check_multiscaling_branch(reference));
  }
  results.push_back(check_decreasing_branch(w));
  results.push_back(check_stationary_tail(w));
  results.push_back(check_linear_control(w));
  results.push_back(check_exactness(1000000, 1000001));
  results.push_back(check_theory_algebra());
  results.push_back(check_determinism());
  return results;
}

}  // namespace levysv

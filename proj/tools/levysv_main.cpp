// Command-line front end: simulate increment tables, estimate scaling
// exponents, print the closed-form law, run the full pipeline, and run the
// self-validation suites. Exit code 0 means success, 3 means a verdict
// failed (estimates off theory, or a validation check red).
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levysv/config.hpp"
#include "levysv/csv.hpp"
#include "levysv/errors.hpp"
#include "levysv/experiment.hpp"
#include "levysv/increments.hpp"
#include "levysv/theory.hpp"
#include "levysv/validation.hpp"

namespace {

constexpr int kExitVerdictFail = 3;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::size_t> n_paths;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonOpts* opts, bool config_required) {
  auto* c = cmd->add_option("-c,--config", opts->config_path,
                            "Experiment config file");
  if (config_required) c->required()->check(CLI::ExistingFile);
  else c->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts->seed, "Override the config seed");
  cmd->add_option("--workers", opts->workers,
                  "Worker threads (0 = hardware concurrency)");
  cmd->add_option("--paths", opts->n_paths, "Override the replica count");
  cmd->add_option("-o,--out", opts->out_dir, "Override the output directory");
}

levysv::ExperimentConfig resolve_config(const CommonOpts& opts) {
  levysv::ExperimentConfig cfg;
  if (!opts.config_path.empty()) cfg = levysv::load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.workers) cfg.workers = *opts.workers;
  if (opts.n_paths) cfg.n_paths = *opts.n_paths;
  if (opts.out_dir) cfg.out_dir = *opts.out_dir;
  return cfg;
}

void print_scaling(const std::vector<levysv::ScalingPoint>& points) {
  std::cout << "  q      A_hat    A_theory  flag\n";
  for (const auto& p : points) {
    std::ostringstream row;
    row.precision(4);
    row << "  " << p.q << "  ";
    if (p.fit)
      row << p.fit->slope << " +- " << p.fit->stderr_;
    else
      row << "(no fit)";
    row << "  ";
    if (p.theory.finite())
      row << p.theory.value;
    else
      row << "divergent";
    row << "  " << levysv::to_string(p.flag);
    if (p.pass) row << (p.pass.value() ? "  [ok]" : "  [off theory]");
    std::cout << row.str() << "\n";
  }
}

int cmd_simulate(const CommonOpts& opts) {
  const auto cfg = resolve_config(opts);
  const auto model = levysv::build_model(cfg);
  const auto table = levysv::simulate_increments(
      model.subordinator, model.drift, cfg.lags, cfg.n_paths, cfg.burn_in,
      cfg.seed, cfg.workers);

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const auto path = fs::path(cfg.out_dir) / "increments.csv";
  std::ofstream os(path);
  levysv::write_increments_csv(os, table);
  std::cout << "wrote " << path.string() << " (" << table.n_paths
            << " replicas x " << table.lags.size() << " lags, seed "
            << cfg.seed << ", config " << levysv::config_hash(cfg) << ")\n";
  return 0;
}

int cmd_estimate(const CommonOpts& opts, const std::string& in_path) {
  const auto cfg = resolve_config(opts);
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open " + in_path);
  const auto table = levysv::read_increments_csv(in);

  levysv::MomentTable moments;
  std::vector<std::string> warnings;
  const auto points = levysv::analyze_increments(table, cfg, &moments,
                                                 &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream os(fs::path(cfg.out_dir) / "moments.csv");
    levysv::write_moments_csv(os, moments);
  }
  {
    std::ofstream os(fs::path(cfg.out_dir) / "scaling.csv");
    levysv::write_scaling_csv(os, points);
  }
  print_scaling(points);

  bool ok = true;
  for (const auto& p : points)
    if (p.pass.has_value() && !p.pass.value()) ok = false;
  return ok ? 0 : kExitVerdictFail;
}

int cmd_theory(double alpha, double gamma, bool linear,
               std::vector<double> q_grid, const std::string& out_path) {
  const levysv::DriftSpec drift = linear
                                      ? levysv::DriftSpec::linear(1.0)
                                      : levysv::DriftSpec::power_law(1.0,
                                                                     gamma);
  if (q_grid.empty())
    for (double q = 1.0; q <= 10.0; q += 0.5) q_grid.push_back(q);

  const auto verdict = levysv::is_multiscaling(drift, alpha);
  const char* label = verdict.value == levysv::Tristate::Yes
                          ? "multiscaling"
                          : verdict.value == levysv::Tristate::No
                                ? "no multiscaling"
                                : "undetermined";
  std::cout << label << ": " << verdict.explanation << "\n";
  if (!linear) {
    const levysv::ModelParams params(alpha, gamma);
    std::cout << "kink at q = " << levysv::q_star(params)
              << ", moments diverge beyond q = " << levysv::blowup_q(params)
              << "\n";
  }

  std::cout << "  q      A(q)     branch\n";
  std::vector<std::pair<double, levysv::TheoryValue>> rows;
  for (const double q : q_grid) {
    levysv::TheoryValue value;
    try {
      value = levysv::theory_for_drift(drift, alpha, q);
    } catch (const levysv::ThresholdError&) {
      std::cout << "  " << q << "  (at a threshold)\n";
      continue;
    }
    rows.emplace_back(q, value);
    std::ostringstream row;
    row.precision(4);
    row << "  " << q << "  ";
    if (value.finite())
      row << value.value;
    else
      row << "divergent";
    row << "  " << levysv::to_string(value.branch);
    std::cout << row.str() << "\n";
  }

  if (!out_path.empty()) {
    std::ofstream os(out_path);
    levysv::write_theory_csv(os, rows);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_report(const CommonOpts& opts) {
  const auto cfg = resolve_config(opts);
  const auto report = levysv::run_experiment(cfg);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  std::cout << "config " << report.config_hash << ", residual drift "
            << report.residual_drift << "\n";
  print_scaling(report.scaling);
  std::ostringstream tail;
  tail.precision(4);
  tail << "  stationary tail: hill " << report.tail.hill << " +- "
       << report.tail.stderr_ << " (theory " << report.tail.theory << ", k="
       << report.tail.k << ") " << (report.tail.pass ? "[ok]" : "[off]");
  std::cout << tail.str() << "\n";
  std::cout << "artifacts in " << cfg.out_dir << ", runtime "
            << static_cast<int>(report.runtime_seconds + 0.5) << "s\n";
  return report.all_pass ? 0 : kExitVerdictFail;
}

int cmd_validate(const std::string& level, unsigned workers) {
  const auto results = level == "full" ? levysv::validate_full(workers)
                                       : levysv::validate_quick(workers);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << " -- "
              << r.detail << "\n";
  }
  std::cout << (all ? "all checks passed" : "CHECKS FAILED") << " ("
            << results.size() << " run)\n";
  return all ? 0 : kExitVerdictFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Heavy-tailed stochastic volatility: simulate log-price increments, "
      "estimate the moment scaling function, and check it against the "
      "closed-form piecewise-linear law"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "levysv 1.0.0");

  CommonOpts sim_opts;
  auto* sim = app.add_subcommand(
      "simulate", "Sample increment tables and write increments.csv");
  add_common(sim, &sim_opts, false);

  CommonOpts est_opts;
  std::string est_in;
  auto* est = app.add_subcommand(
      "estimate", "Estimate moments and scaling exponents from a table");
  est->add_option("-i,--in", est_in, "increments.csv to analyze")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(est, &est_opts, false);

  double th_alpha = 1.0;
  double th_gamma = 3.0;
  bool th_linear = false;
  std::vector<double> th_q;
  std::string th_out;
  auto* th = app.add_subcommand(
      "theory", "Print the closed-form scaling function");
  th->add_option("--alpha", th_alpha, "Jump tail index")->required();
  th->add_option("--gamma", th_gamma, "Reversion exponent");
  th->add_flag("--linear", th_linear, "Linear reversion control model");
  th->add_option("-q,--q", th_q, "Moment orders (default 1..10 step 0.5)");
  th->add_option("-o,--out", th_out, "Also write theory.csv here");

  CommonOpts rep_opts;
  auto* rep = app.add_subcommand(
      "report", "Full pipeline: simulate, estimate, compare, write report");
  add_common(rep, &rep_opts, false);

  std::string val_level = "quick";
  unsigned val_workers = 0;
  auto* val = app.add_subcommand("validate", "Run the self-check suites");
  val->add_option("--level", val_level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  val->add_option("--workers", val_workers,
                  "Worker threads (0 = hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message (or help/version)
    return code == 0 ? 0 : 1;      // usage errors exit 1, per the contract
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (est->parsed()) return cmd_estimate(est_opts, est_in);
    if (th->parsed())
      return cmd_theory(th_alpha, th_gamma, th_linear, th_q, th_out);
    if (rep->parsed()) return cmd_report(rep_opts);
    if (val->parsed()) return cmd_validate(val_level, val_workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levysv/drift.hpp"
#include "levysv/subordinator.hpp"

namespace levysv {

// Experiment description, loadable from a flat sectioned key=value file
// (sections [subordinator], [drift], [experiment]; '#' comments; no nesting).
// Unknown keys are rejected so typos cannot silently fall back to defaults.
struct ExperimentConfig {
  // [subordinator]
  double drift = 0.0;
  double jump_rate = 1.0;
  double alpha = 1.0;
  double x_min = 1.0;
  std::optional<double> epsilon;  // small-jump truncation level

  // [drift]
  std::string drift_kind = "power";  // power | linear
  double coefficient = 1.0;          // key "C"
  double gamma = 3.0;                // key "gamma", power kind only

  // [experiment]
  // Dyadic lags 2^-12 .. 2^-3; the decimal literals are exact in binary.
  std::vector<double> lags{0.000244140625, 0.00048828125, 0.0009765625,
                           0.001953125,    0.00390625,    0.0078125,
                           0.015625,       0.03125,       0.0625,
                           0.125};
  std::vector<double> q_grid{1.0, 2.0, 3.0, 8.0};
  std::size_t n_paths = 100000;
  double burn_in = 200.0;
  std::uint64_t seed = 20260818;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  std::size_t n_tail_samples = 200000;
  std::size_t hill_k = 0;  // 0 = floor(n^(2/3))
  double tol_diffusive = 0.05;
  double tol_multiscaling = 0.25;
  double tol_tail = 0.3;
};

// Parses and validates; throws ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical serialization: fixed section and key order, 17-digit floats.
// Equal configs serialize identically; any field change changes the text.
std::string canonical_config(const ExperimentConfig& cfg);

// FNV-1a over the canonical serialization, as fixed-width hex. Covers the
// statistical identity of the run only: out_dir and workers are normalized
// away, since neither changes a byte of the artifacts.
std::string config_hash(const ExperimentConfig& cfg);

struct BuiltModel {
  SubordinatorSpec subordinator;
  DriftSpec drift;
  // Drift plus mean rate of any truncated-away small jumps; bounds the
  // approximation error of simulating only the retained jumps.
  double residual_drift;
};

BuiltModel build_model(const ExperimentConfig& cfg);

// The q grid with every entry nudged at least 0.05 away from a scaling
// threshold (side-preserving; entries exactly at a threshold move below).
// One warning line per adjustment.
std::vector<double> adjusted_q_grid(const ExperimentConfig& cfg,
                                    std::vector<std::string>* warnings);

}  // namespace levysv

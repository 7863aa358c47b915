#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levysv/config.hpp"
#include "levysv/estimators.hpp"
#include "levysv/theory.hpp"

namespace levysv {

struct ScalingPoint {
  double q = 0.0;
  std::optional<SlopeFit> fit;  // absent when the moment diverges
  TheoryValue theory;
  DivergenceFlag flag = DivergenceFlag::Stable;
  std::optional<bool> pass;  // |fit - theory| within the branch tolerance
};

struct TailResult {
  double hill = 0.0;
  double stderr_ = 0.0;
  std::size_t k = 0;
  std::size_t n = 0;
  double theory = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string config_hash;
  std::vector<std::string> warnings;
  double residual_drift = 0.0;
  MomentTable moments;
  std::vector<ScalingPoint> scaling;
  TailResult tail;
  double runtime_seconds = 0.0;
  bool all_pass = false;
};

// Full pipeline: simulate increments, estimate moments and scaling
// exponents, compare against the closed-form law and the stationary tail
// index, and write increments.csv, moments.csv, scaling.csv and report.json
// into cfg.out_dir. Reported verdicts use the config's tolerance bands.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Same pipeline without touching the filesystem (artifacts can be written
// separately); used by tests and the in-memory determinism check.
ExperimentReport run_experiment_in_memory(const ExperimentConfig& cfg,
                                          IncrementTable* increments_out);

// Moment and scaling analysis of an already-simulated increment table (no
// stationary-tail stage); the estimate command uses this on tables read
// back from disk.
std::vector<ScalingPoint> analyze_increments(const IncrementTable& table,
                                             const ExperimentConfig& cfg,
                                             MomentTable* moments_out,
                                             std::vector<std::string>* warnings);

void write_scaling_csv(std::ostream& os,
                       const std::vector<ScalingPoint>& points);

std::string report_json(const ExperimentConfig& cfg,
                        const ExperimentReport& report);

}  // namespace levysv

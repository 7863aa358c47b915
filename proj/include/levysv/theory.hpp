#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "levysv/drift.hpp"

namespace levysv {

// Parameters the scaling law depends on: the jump law's tail index and the
// mean-reversion growth exponent. Requires alpha > 0, gamma > 1 and
// alpha + gamma > 2 (existence of the stationary law).
class ModelParams {
 public:
  ModelParams(double tail_exponent, double drift_exponent);

  double tail_exponent() const { return tail_exponent_; }
  double drift_exponent() const { return drift_exponent_; }

 private:
  double tail_exponent_;
  double drift_exponent_;
};

// Moment order where the scaling exponent leaves the diffusive q/2 line.
double q_star(const ModelParams& params);

// Moment order beyond which increment moments are infinite; +inf when the
// drift exponent is >= 2 (every moment scales).
double blowup_q(const ModelParams& params);

enum class Branch { Diffusive, Multiscaling, Divergent };

std::string to_string(Branch branch);

// Scaling exponent with its branch. `value` is meaningful only for the two
// finite branches; Divergent is a tag (serialized "-inf"), never a bare
// floating-point infinity in computations.
struct TheoryValue {
  Branch branch = Branch::Diffusive;
  double value = 0.0;

  bool finite() const { return branch != Branch::Divergent; }
};

// Piecewise-linear scaling exponent of order-q increment moments:
//   q/2                                   for 1 <= q < q_star
//   (g-2)/(2(g-1)) q + (a+g-1)/(g-1)      for q_star < q < blowup_q
//   divergent                             for q > blowup_q
// (a = tail exponent, g = drift exponent). Queries exactly at a threshold
// raise ThresholdError: the limit order is ambiguous there.
TheoryValue theoretical_exponent(const ModelParams& params, double q);

// Tail index of the stationary variance law: alpha + gamma - 1.
double stationary_tail_exponent(const ModelParams& params);

enum class Tristate { No, Yes, Undetermined };

struct MultiscalingVerdict {
  Tristate value = Tristate::Undetermined;
  std::string explanation;
};

// Whether the drift bends the scaling exponent at all: yes for superlinear
// power growth (exponent > 1, given alpha + exponent > 2), no for linear
// growth, undetermined for a general drift with no declared exponent.
MultiscalingVerdict is_multiscaling(const DriftSpec& drift,
                                    double tail_exponent);
MultiscalingVerdict is_multiscaling(const DriftSpec& drift,
                                    const ModelParams& params);

// Scaling law for an experiment's drift/tail pair, covering the linear
// control: linear growth gives q/2 up to the finite-moment cap 2*alpha and
// divergence beyond it; superlinear power growth delegates to
// theoretical_exponent.
TheoryValue theory_for_drift(const DriftSpec& drift, double tail_exponent,
                             double q);

// Thresholds relevant to a drift/tail pair, ascending; used to keep q grids
// away from ambiguous points.
std::vector<double> scaling_thresholds(const DriftSpec& drift,
                                       double tail_exponent);

// CSV rows "q,A_theory,branch".
void write_theory_csv(std::ostream& os,
                      const std::vector<std::pair<double, TheoryValue>>& rows);

}  // namespace levysv

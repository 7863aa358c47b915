#include "levysv/theory.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "levysv/csv.hpp"
#include "levysv/errors.hpp"

namespace levysv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// "Exactly at" a threshold, up to floating-point representation.
bool at_threshold(double q, double threshold) {
  if (!std::isfinite(threshold)) return false;
  return std::abs(q - threshold) <= 1e-12 * std::max(1.0, threshold);
}

[[noreturn]] void throw_threshold(double q, double threshold,
                                  const char* name) {
  throw ThresholdError("q=" + format17(q) + " sits exactly at " + name + "=" +
                       format17(threshold) +
                       "; the scaling exponent is ambiguous there");
}

}  // namespace

ModelParams::ModelParams(double tail_exponent, double drift_exponent)
    : tail_exponent_(tail_exponent), drift_exponent_(drift_exponent) {
  if (!(tail_exponent_ > 0.0))
    throw std::invalid_argument("tail exponent must be > 0");
  if (!(drift_exponent_ > 1.0))
    throw std::invalid_argument("drift exponent must be > 1");
  if (!(tail_exponent_ + drift_exponent_ > 2.0))
    throw InvalidRegimeError(
        "tail exponent + drift exponent must exceed 2 for a stationary law");
}

double q_star(const ModelParams& params) {
  return 2.0 * (params.tail_exponent() + params.drift_exponent() - 1.0);
}

double blowup_q(const ModelParams& params) {
  if (params.drift_exponent() >= 2.0) return kInf;
  return 2.0 * params.tail_exponent() / (2.0 - params.drift_exponent());
}

std::string to_string(Branch branch) {
  switch (branch) {
    case Branch::Diffusive:
      return "diffusive";
    case Branch::Multiscaling:
      return "multiscaling";
    case Branch::Divergent:
      return "divergent";
  }
  return "diffusive";
}

TheoryValue theoretical_exponent(const ModelParams& params, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  const double qs = q_star(params);
  const double qb = blowup_q(params);
  if (at_threshold(q, qs)) throw_threshold(q, qs, "q_star");
  if (at_threshold(q, qb)) throw_threshold(q, qb, "blowup_q");

  if (q < qs) return {Branch::Diffusive, 0.5 * q};
  if (q < qb) {
    const double a = params.tail_exponent();
    const double g = params.drift_exponent();
    const double slope = (g - 2.0) / (2.0 * (g - 1.0));
    const double offset = (a + g - 1.0) / (g - 1.0);
    return {Branch::Multiscaling, slope * q + offset};
  }
  return {Branch::Divergent, -kInf};
}

double stationary_tail_exponent(const ModelParams& params) {
  return params.tail_exponent() + params.drift_exponent() - 1.0;
}

MultiscalingVerdict is_multiscaling(const DriftSpec& drift,
                                    double tail_exponent) {
  if (!(tail_exponent > 0.0))
    throw std::invalid_argument("tail exponent must be > 0");

  const double g = drift.exponent();
  if (drift.kind() == DriftKind::General && std::isnan(g))
    return {Tristate::Undetermined,
            "general drift with no declared growth exponent: the scaling "
            "behavior depends on how fast it grows"};
  if (drift.linear_growth())
    return {Tristate::No,
            "linear mean reversion relaxes too slowly to bend the scaling "
            "exponent: every moment scales diffusively"};
  if (!(tail_exponent + g > 2.0))
    return {Tristate::Undetermined,
            "tail exponent + drift exponent <= 2: no stationary regime to "
            "scale in"};
  return {Tristate::Yes,
          "superlinear mean reversion (exponent " + format17(g) +
              ") caps integrated variance over short windows, bending the "
              "scaling exponent above q_star"};
}

MultiscalingVerdict is_multiscaling(const DriftSpec& drift,
                                    const ModelParams& params) {
  return is_multiscaling(drift, params.tail_exponent());
}

TheoryValue theory_for_drift(const DriftSpec& drift, double tail_exponent,
                             double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  if (drift.kind() == DriftKind::General && std::isnan(drift.exponent()))
    throw InvalidRegimeError(
        "theory_for_drift: general drift needs a declared growth exponent");
  if (drift.linear_growth()) {
    const double cap = 2.0 * tail_exponent;
    if (at_threshold(q, cap)) throw_threshold(q, cap, "moment cap");
    if (q > cap) return {Branch::Divergent, -kInf};
    return {Branch::Diffusive, 0.5 * q};
  }
  return theoretical_exponent(ModelParams(tail_exponent, drift.exponent()), q);
}

std::vector<double> scaling_thresholds(const DriftSpec& drift,
                                       double tail_exponent) {
  std::vector<double> out;
  if (drift.kind() == DriftKind::General && std::isnan(drift.exponent()))
    return out;
  if (drift.linear_growth()) {
    out.push_back(2.0 * tail_exponent);
    return out;
  }
  const ModelParams params(tail_exponent, drift.exponent());
  out.push_back(q_star(params));
  const double qb = blowup_q(params);
  if (std::isfinite(qb)) out.push_back(qb);
  return out;
}

void write_theory_csv(
    std::ostream& os,
    const std::vector<std::pair<double, TheoryValue>>& rows) {
  os << "q,A_theory,branch\n";
  for (const auto& [q, value] : rows) {
    os << format17(q) << ',';
    if (value.finite())
      os << format17(value.value);
    else
      os << "-inf";
    os << ',' << to_string(value.branch) << '\n';
  }
}

}  // namespace levysv

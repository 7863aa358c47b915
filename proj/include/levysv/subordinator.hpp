#pragma once

#include <variant>
#include <vector>

#include "levysv/rng.hpp"

namespace levysv {

// Pareto jump sizes on [x_min, inf) with tail P(J > x) = (x_min/x)^alpha.
struct ParetoJumps {
  double x_min = 1.0;
  double alpha = 1.0;

  double quantile(double p) const;  // inverse CDF, p in (0,1)
};

// Finitely many jump sizes with given probabilities. Weights are normalized
// at construction of the owning spec.
struct AtomJumps {
  std::vector<double> sizes;
  std::vector<double> weights;
};

using JumpLaw = std::variant<ParetoJumps, AtomJumps>;

// Driving subordinator: deterministic drift plus compound-Poisson jumps with
// rate `jump_rate` and normalized jump law `law`. Always nondecreasing.
class SubordinatorSpec {
 public:
  SubordinatorSpec(double drift, double jump_rate, JumpLaw law);

  double drift() const { return drift_; }
  double jump_rate() const { return jump_rate_; }
  const JumpLaw& law() const { return law_; }

  // Power-law tail index of the jump law: alpha for Pareto, +inf for atom
  // laws (bounded support, all moments finite).
  double tail_exponent() const;

  // Mean jump size; +inf for Pareto with alpha <= 1.
  double mean_jump() const;

 private:
  double drift_;
  double jump_rate_;
  JumpLaw law_;
};

// One jump size drawn from the spec's law.
double sample_jump(const SubordinatorSpec& spec, Rng& rng);

// Arrival times of the compound-Poisson part on [0, horizon], strictly
// increasing, via exponential spacings.
std::vector<double> sample_jump_times(const SubordinatorSpec& spec,
                                      double horizon, Rng& rng);

// Laplace exponent psi(s) = drift*s + rate * integral (1 - e^{-s x}) dF(x),
// so that E[exp(-s L_t)] = exp(-t psi(s)). Pareto laws integrate by adaptive
// quadrature (relative tolerance 1e-8, at most 1e6 evaluations; failure
// raises QuadratureError). Atom laws are exact sums.
double laplace_exponent(const SubordinatorSpec& spec, double s);

struct Truncation {
  SubordinatorSpec spec;     // jump law restricted to [epsilon, inf)
  double residual_drift;     // drift + mean rate of the discarded small jumps
};

// Removes jumps below `epsilon`, returning the finite part that a simulator
// can realize jump-by-jump plus the mean inflow rate of everything dropped
// (deterministic drift and small jumps), usable as an approximation-error
// bound. epsilon at or below the law's support leaves the spec unchanged.
Truncation truncate(const SubordinatorSpec& spec, double epsilon);

// Expected number of jumps of size > u per unit time. Constant (= jump_rate)
// for u below the support, power decay (x_min/u)^alpha for Pareto above it.
double tail_mass(const SubordinatorSpec& spec, double u);

}  // namespace levysv

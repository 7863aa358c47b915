#include "levysv/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "levysv/errors.hpp"
#include "levysv/numerics.hpp"

namespace levysv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ParetoJumps::quantile(double p) const {
  return x_min * std::pow(1.0 - p, -1.0 / alpha);
}

SubordinatorSpec::SubordinatorSpec(double drift, double jump_rate, JumpLaw law)
    : drift_(drift), jump_rate_(jump_rate), law_(std::move(law)) {
  if (!(drift_ >= 0.0)) throw std::invalid_argument("drift must be >= 0");
  if (!(jump_rate_ >= 0.0))
    throw std::invalid_argument("jump_rate must be >= 0");
  if (const auto* pareto = std::get_if<ParetoJumps>(&law_)) {
    if (!(pareto->x_min > 0.0))
      throw std::invalid_argument("Pareto x_min must be > 0");
    if (!(pareto->alpha > 0.0))
      throw std::invalid_argument("Pareto alpha must be > 0");
  } else {
    auto& atoms = std::get<AtomJumps>(law_);
    if (atoms.sizes.empty() || atoms.sizes.size() != atoms.weights.size())
      throw std::invalid_argument("atom law needs matching sizes and weights");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.sizes.size(); ++i) {
      if (!(atoms.sizes[i] > 0.0))
        throw std::invalid_argument("atom sizes must be > 0");
      if (!(atoms.weights[i] > 0.0))
        throw std::invalid_argument("atom weights must be > 0");
      total += atoms.weights[i];
    }
    for (auto& w : atoms.weights) w /= total;
  }
}

double SubordinatorSpec::tail_exponent() const {
  if (const auto* pareto = std::get_if<ParetoJumps>(&law_))
    return pareto->alpha;
  return kInf;
}

double SubordinatorSpec::mean_jump() const {
  if (const auto* pareto = std::get_if<ParetoJumps>(&law_)) {
    if (pareto->alpha <= 1.0) return kInf;
    return pareto->alpha * pareto->x_min / (pareto->alpha - 1.0);
  }
  const auto& atoms = std::get<AtomJumps>(law_);
  double mean = 0.0;
  for (std::size_t i = 0; i < atoms.sizes.size(); ++i)
    mean += atoms.sizes[i] * atoms.weights[i];
  return mean;
}

double sample_jump(const SubordinatorSpec& spec, Rng& rng) {
  const double u = rng.uniform01();
  if (const auto* pareto = std::get_if<ParetoJumps>(&spec.law()))
    return pareto->x_min * std::pow(u, -1.0 / pareto->alpha);
  const auto& atoms = std::get<AtomJumps>(spec.law());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.sizes.size(); ++i) {
    acc += atoms.weights[i];
    if (u < acc) return atoms.sizes[i];
  }
  return atoms.sizes.back();
}

std::vector<double> sample_jump_times(const SubordinatorSpec& spec,
                                      double horizon, Rng& rng) {
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  std::vector<double> times;
  if (spec.jump_rate() == 0.0) return times;
  double t = rng.exponential(spec.jump_rate());
  while (t <= horizon) {
    times.push_back(t);
    t += rng.exponential(spec.jump_rate());
  }
  return times;
}

double laplace_exponent(const SubordinatorSpec& spec, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("s must be >= 0");
  if (s == 0.0) return 0.0;

  double jump_part = 0.0;
  if (const auto* pareto = std::get_if<ParetoJumps>(&spec.law())) {
    if (spec.jump_rate() > 0.0) {
      // Substituting u = (x_min/x)^alpha maps the tail integral onto (0,1]
      // with a bounded smooth integrand.
      const double x_min = pareto->x_min;
      const double inv_alpha = 1.0 / pareto->alpha;
      auto integrand = [&](double u) {
        if (u <= 0.0) return 1.0;
        return 1.0 - std::exp(-s * x_min * std::pow(u, -inv_alpha));
      };
      const auto quad = adaptive_simpson(integrand, 0.0, 1.0, 1e-8, 1000000);
      if (!quad.converged)
        throw QuadratureError(
            "laplace_exponent quadrature did not reach tolerance 1e-8",
            quad.achieved_rel_tol, quad.evaluations);
      jump_part = spec.jump_rate() * quad.value;
    }
  } else {
    const auto& atoms = std::get<AtomJumps>(spec.law());
    double sum = 0.0;
    for (std::size_t i = 0; i < atoms.sizes.size(); ++i)
      sum += atoms.weights[i] * (1.0 - std::exp(-s * atoms.sizes[i]));
    jump_part = spec.jump_rate() * sum;
  }
  return spec.drift() * s + jump_part;
}

Truncation truncate(const SubordinatorSpec& spec, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");

  if (const auto* pareto = std::get_if<ParetoJumps>(&spec.law())) {
    if (epsilon <= pareto->x_min) return {spec, spec.drift()};
    const double keep_fraction =
        std::pow(pareto->x_min / epsilon, pareto->alpha);
    // Mean of jumps in [x_min, epsilon) per unit time.
    const double a = pareto->alpha;
    const double xm = pareto->x_min;
    double small_mean_rate;
    if (a == 1.0) {
      small_mean_rate = spec.jump_rate() * xm * std::log(epsilon / xm);
    } else {
      small_mean_rate = spec.jump_rate() * a * std::pow(xm, a) *
                        (std::pow(epsilon, 1.0 - a) - std::pow(xm, 1.0 - a)) /
                        (1.0 - a);
    }
    SubordinatorSpec kept(spec.drift(), spec.jump_rate() * keep_fraction,
                          ParetoJumps{epsilon, pareto->alpha});
    return {kept, spec.drift() + small_mean_rate};
  }

  const auto& atoms = std::get<AtomJumps>(spec.law());
  AtomJumps kept_law;
  double kept_weight = 0.0;
  double small_mean = 0.0;
  for (std::size_t i = 0; i < atoms.sizes.size(); ++i) {
    if (atoms.sizes[i] >= epsilon) {
      kept_law.sizes.push_back(atoms.sizes[i]);
      kept_law.weights.push_back(atoms.weights[i]);
      kept_weight += atoms.weights[i];
    } else {
      small_mean += atoms.sizes[i] * atoms.weights[i];
    }
  }
  if (kept_law.sizes.empty())
    throw std::invalid_argument(
        "epsilon above the jump law's support leaves a degenerate spec");
  SubordinatorSpec kept(spec.drift(), spec.jump_rate() * kept_weight,
                        std::move(kept_law));
  return {kept, spec.drift() + spec.jump_rate() * small_mean};
}

double tail_mass(const SubordinatorSpec& spec, double u) {
  if (const auto* pareto = std::get_if<ParetoJumps>(&spec.law())) {
    if (u <= pareto->x_min) return spec.jump_rate();
    return spec.jump_rate() * std::pow(pareto->x_min / u, pareto->alpha);
  }
  const auto& atoms = std::get<AtomJumps>(spec.law());
  double mass = 0.0;
  for (std::size_t i = 0; i < atoms.sizes.size(); ++i)
    if (atoms.sizes[i] > u) mass += atoms.weights[i];
  return spec.jump_rate() * mass;
}

}  // namespace levysv

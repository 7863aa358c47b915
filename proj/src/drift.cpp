#include "levysv/drift.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace levysv {

DriftSpec DriftSpec::power_law(double coefficient, double exponent) {
  if (!(coefficient > 0.0))
    throw std::invalid_argument("drift coefficient must be > 0");
  if (!(exponent >= 1.0))
    throw std::invalid_argument("drift exponent must be >= 1");
  return DriftSpec(DriftKind::PowerLaw, coefficient, exponent, {});
}

DriftSpec DriftSpec::linear(double coefficient) {
  if (!(coefficient > 0.0))
    throw std::invalid_argument("drift coefficient must be > 0");
  return DriftSpec(DriftKind::Linear, coefficient, 1.0, {});
}

DriftSpec DriftSpec::general(std::function<double(double)> fn) {
  return general(std::move(fn), std::numeric_limits<double>::quiet_NaN());
}

DriftSpec DriftSpec::general(std::function<double(double)> fn,
                             double declared_exponent) {
  if (!fn) throw std::invalid_argument("general drift needs a callable");
  if (!std::isnan(declared_exponent) && !(declared_exponent >= 1.0))
    throw std::invalid_argument("declared exponent must be >= 1");
  if (std::abs(fn(0.0)) > 1e-12)
    throw std::invalid_argument("drift must vanish at 0");

  // Shape check on a geometric grid: nondecreasing with finite slopes.
  double prev_v = 0.0;
  double prev_f = fn(0.0);
  for (double v = 1e-6; v <= 1e6; v *= 2.0) {
    const double fv = fn(v);
    if (!std::isfinite(fv))
      throw std::invalid_argument("drift must be finite on (0, 1e6]");
    if (fv + 1e-12 < prev_f)
      throw std::invalid_argument("drift must be nondecreasing");
    const double slope = (fv - prev_f) / (v - prev_v);
    if (!std::isfinite(slope))
      throw std::invalid_argument("drift must be locally Lipschitz");
    prev_v = v;
    prev_f = fv;
  }
  return DriftSpec(DriftKind::General, 1.0, declared_exponent, std::move(fn));
}

double DriftSpec::operator()(double v) const {
  switch (kind_) {
    case DriftKind::PowerLaw:
      return coefficient_ * std::pow(v, exponent_);
    case DriftKind::Linear:
      return coefficient_ * v;
    case DriftKind::General:
      return fn_(v);
  }
  return 0.0;
}

}  // namespace levysv

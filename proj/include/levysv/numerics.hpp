#pragma once

#include <cstddef>
#include <functional>

namespace levysv {

struct QuadratureResult {
  double value = 0.0;
  double achieved_rel_tol = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// Adaptive Simpson integration of f over [a, b]. Subdivides until the local
// Richardson error estimate meets rel_tol or the evaluation budget runs out;
// in the latter case `converged` is false and `achieved_rel_tol` reports the
// worst accepted interval.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double rel_tol,
                                  std::size_t max_evaluations);

// Adaptive embedded Runge-Kutta (Cash-Karp 4(5)) for a small autonomous
// system y' = f(y), integrated from t=0 to t=t_end. `dim` <= 4. Components
// are clamped at zero when `preserve_positivity` is set; the vector fields
// used here vanish at zero so the clamp is exact, not a fudge.
void rk45_integrate(const std::function<void(const double*, double*)>& f,
                    double* y, int dim, double t_end, double rel_tol,
                    bool preserve_positivity);

}  // namespace levysv

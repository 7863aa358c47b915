#include "levysv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace levysv {

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  double rel_tol;
  std::size_t max_evaluations;
  std::size_t evaluations;
  double worst_rel_err;
  double scale;  // running magnitude estimate used for relative error
};

double simpson_recurse(SimpsonState& st, double a, double b, double fa,
                       double fm, double fb, double whole, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  st.evaluations += 2;

  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double refined = left + right;
  const double err = (refined - whole) / 15.0;

  const double denom = std::max(st.scale, std::numeric_limits<double>::min());
  const double rel_err = std::abs(err) / denom;
  const bool budget_left = st.evaluations + 4 <= st.max_evaluations;
  if (depth > 0 && rel_err > st.rel_tol && budget_left) {
    return simpson_recurse(st, a, m, fa, flm, fm, left, depth - 1) +
           simpson_recurse(st, m, b, fm, frm, fb, right, depth - 1);
  }
  st.worst_rel_err = std::max(st.worst_rel_err, rel_err);
  return refined + err;
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double rel_tol,
                                  std::size_t max_evaluations) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

  SimpsonState st{&f, rel_tol, max_evaluations, 3, 0.0,
                  std::max(std::abs(whole), 1e-300)};
  out.value = simpson_recurse(st, a, b, fa, fm, fb, whole, 60);
  out.evaluations = st.evaluations;
  out.achieved_rel_tol = st.worst_rel_err;
  out.converged = st.worst_rel_err <= rel_tol;
  return out;
}

void rk45_integrate(const std::function<void(const double*, double*)>& f,
                    double* y, int dim, double t_end, double rel_tol,
                    bool preserve_positivity) {
  // Cash-Karp tableau.
  static constexpr double a2[] = {1.0 / 5};
  static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
  static constexpr double a4[] = {3.0 / 10, -9.0 / 10, 6.0 / 5};
  static constexpr double a5[] = {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27};
  static constexpr double a6[] = {1631.0 / 55296, 175.0 / 512, 575.0 / 13824,
                                  44275.0 / 110592, 253.0 / 4096};
  static constexpr double b5[] = {37.0 / 378,  0.0, 250.0 / 621,
                                  125.0 / 594, 0.0, 512.0 / 1771};
  static constexpr double b4[] = {2825.0 / 27648,  0.0,           18575.0 / 48384,
                                  13525.0 / 55296, 277.0 / 14336, 1.0 / 4};

  if (t_end <= 0.0) return;
  constexpr int kMaxDim = 4;
  double k[6][kMaxDim];
  double ytmp[kMaxDim];
  double y5[kMaxDim];

  const double abs_tol = 1e-14;
  double t = 0.0;
  double h = t_end;

  // Trial-stage states can overshoot below zero on stiff decays; evaluating
  // the vector field there may be undefined (fractional powers), so clamp
  // the stage inputs too when positivity is requested.
  const auto clamp_stage = [&](double* v) {
    if (preserve_positivity)
      for (int i = 0; i < dim; ++i)
        if (v[i] < 0.0) v[i] = 0.0;
  };

  while (t < t_end) {
    h = std::min(h, t_end - t);

    f(y, k[0]);
    for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a2[0] * k[0][i];
    clamp_stage(ytmp);
    f(ytmp, k[1]);
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a3[0] * k[0][i] + a3[1] * k[1][i]);
    clamp_stage(ytmp);
    f(ytmp, k[2]);
    for (int i = 0; i < dim; ++i)
      ytmp[i] =
          y[i] + h * (a4[0] * k[0][i] + a4[1] * k[1][i] + a4[2] * k[2][i]);
    clamp_stage(ytmp);
    f(ytmp, k[3]);
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a5[0] * k[0][i] + a5[1] * k[1][i] +
                            a5[2] * k[2][i] + a5[3] * k[3][i]);
    clamp_stage(ytmp);
    f(ytmp, k[4]);
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a6[0] * k[0][i] + a6[1] * k[1][i] +
                            a6[2] * k[2][i] + a6[3] * k[3][i] +
                            a6[4] * k[4][i]);
    clamp_stage(ytmp);
    f(ytmp, k[5]);

    double err_ratio = 0.0;
    for (int i = 0; i < dim; ++i) {
      double s5 = 0.0;
      double s4 = 0.0;
      for (int j = 0; j < 6; ++j) {
        s5 += b5[j] * k[j][i];
        s4 += b4[j] * k[j][i];
      }
      y5[i] = y[i] + h * s5;
      const double err = std::abs(h * (s5 - s4));
      const double tol = abs_tol + rel_tol * std::max(std::abs(y[i]),
                                                      std::abs(y5[i]));
      const double ratio = err / tol;
      // A non-finite trial step must be rejected, never mistaken for a
      // zero-error one (max(0, NaN) would keep 0).
      if (!std::isfinite(y5[i]) || !std::isfinite(ratio)) {
        err_ratio = std::numeric_limits<double>::infinity();
        break;
      }
      err_ratio = std::max(err_ratio, ratio);
    }

    if (err_ratio <= 1.0) {
      t += h;
      for (int i = 0; i < dim; ++i) {
        y[i] = y5[i];
        if (preserve_positivity && y[i] < 0.0) y[i] = 0.0;
      }
      const double grow =
          err_ratio > 0.0 ? 0.9 * std::pow(err_ratio, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(err_ratio, -0.25), 0.1, 0.9);
    }
    if (!(h > 0.0) || t + h == t) break;  // step underflow; nothing better to do
  }
}

}  // namespace levysv

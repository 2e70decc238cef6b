#include "wigdet/quadrature.hpp"

#include <cmath>

#include "wigdet/errors.hpp"

namespace wigdet {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double whole, double tol,
               int depth) {
  if (depth > 60) throw numeric_error("adaptive quadrature did not converge");
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    throw numeric_error("quadrature integrand is non-finite");
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = left + right - whole;
  if (std::fabs(err) <= 15.0 * tol)
    return left + right + err / 15.0;
  return recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
         recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
    throw numeric_error("quadrature integrand is non-finite at an endpoint");
  const double whole = simpson(fa, fm, fb, b - a);
  return recurse(f, a, b, fa, fm, fb, whole, tol, 0);
}

double integrate_real_line(const std::function<double(double)>& f, double tol,
                           double tail_eps, double w0) {
  double w = w0;
  for (int i = 0; i < 16; ++i, w *= 2.0) {
    if (std::fabs(f(w)) < tail_eps && std::fabs(f(-w)) < tail_eps) {
      // split at 0 so sharply peaked integrands are resolved
      return adaptive_simpson(f, -w, 0.0, tol / 2.0) +
             adaptive_simpson(f, 0.0, w, tol / 2.0);
    }
  }
  throw numeric_error("integrand tail does not decay; no integration window found");
}

}  // namespace wigdet

#pragma once

#include <functional>

namespace wigdet {

// Adaptive Simpson integration to absolute tolerance `tol`.
// Throws numeric_error if the recursion cannot reach the tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

// Integral of f over the whole real line for integrands with decaying tails:
// integrates on [-w, w], growing w by doubling from w0 until
// |f(+-w)| < tail_eps.  Throws numeric_error when no such window is found.
double integrate_real_line(const std::function<double(double)>& f, double tol,
                           double tail_eps = 1e-12, double w0 = 10.0);

}  // namespace wigdet

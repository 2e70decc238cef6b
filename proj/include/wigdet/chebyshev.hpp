#pragma once

#include <functional>
#include <vector>

namespace wigdet {

// Chebyshev coefficients of f against T_l(x/2) under the arcsine weight
// on [-2, 2]:
//   tau_l(f) = (1/pi) * integral T_l(x/2) f(x) / sqrt(4 - x^2) dx.
struct ChebCoeffs {
  std::vector<double> values;  // tau_0 .. tau_lmax
  int lmax = 0;

  double operator[](int l) const { return values[static_cast<size_t>(l)]; }
};

// Gauss-Chebyshev quadrature on x = 2 cos(theta) midpoint nodes; node count
// is max(4*lmax + 64, min_nodes), exact for polynomial f of degree
// <= node_count - 1.
ChebCoeffs chebyshev_coeffs(const std::function<double(double)>& f, int lmax,
                            int min_nodes = 0);

// integral of f against the semicircle density sqrt(4-x^2)/(2 pi);
// same quadrature nodes (equals tau_0 - tau_2).
double semicircle_average(const std::function<double(double)>& f,
                          int nodes = 1024);

struct CltMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// lmax default: max(50, ceil(log(1e-12)/log(sqrt(lambda)))).
int default_lmax(double lambda);

// Limiting mean/variance of the centered LSS of f for a rank-k spiked
// Wigner matrix:
//   m_k(f) = (f(2)+f(-2))/4 - tau_0/2 + (w2-2) tau_2 + (w4-3) tau_4
//            + k * sum_l lambda^{l/2} tau_l,
//   V_0(f) = (w2-2) tau_1^2 + 2 (w4-3) tau_2^2 + 2 sum_l l tau_l^2.
// Throws numeric_error when the series tails fail the 1e-10 check.
CltMoments clt_mean_variance(const std::function<double(double)>& f,
                             double lambda, double w2, double w4, int k,
                             int lmax = -1);

// Entrywise-transformed variant:
//   mean gains k sqrt(lambda F_d) tau_1, the tau_2 coefficient becomes
//   (w2 - 2 + k lambda G), the drift series starts at l = 3 with ratio
//   lambda F, and w4 is replaced by w4t throughout.
CltMoments clt_mean_variance_transformed(const std::function<double(double)>& f,
                                         double lambda, double FH, double FHd,
                                         double GH, double w2, double w4t,
                                         int k, int lmax = -1);

}  // namespace wigdet

#pragma once

#include <functional>
#include <utility>

#include "wigdet/spectrum.hpp"

namespace wigdet {

// Closed-form limiting mean/variance bundle for the statistic L_lambda of a
// rank-k spiked Wigner matrix:
//   m_0 = -log(1-l)/2 + ((w2-1)/(w4-1) - 1/2) l + (w4-3) l^2 / 4
//   V_0 = -2 log(1-l) + (4/w2 - 2) l + (2/(w4-1) - 1) l^2
//   m_k = m_0 + k * delta,  delta = -log(1-l) + (2/w2-1) l + (1/(w4-1)-1/2) l^2
struct LssModel {
  double lambda = 0.0;
  double w2 = 0.0;
  double w4 = 0.0;
  int k = 0;
  double m0 = 0.0;
  double mk = 0.0;
  double v0 = 0.0;
};

// Per-rank mean shift delta; strictly positive on the valid domain.
double rank_drift(double lambda, double w2, double w4);

LssModel lss_mean_variance(double lambda, double w2, double w4, int k);

// Critical value m_lambda = (m_{k1} + m_{k2}) / 2.
double critical_value(double lambda, double w2, double w4, int k1, int k2);

// L_lambda = -sum_i log((1+l) - sqrt(l) mu_i) + l n / 2
//            + sqrt(l) (2/w2 - 1) sum_i mu_i
//            + l (1/(w4-1) - 1/2) (sum_i mu_i^2 - n).
// The log-determinant term comes from the eigenvalues, never a dense LU.
// Throws spectral_overflow if any log argument is <= 0
// (i.e. mu_1 >= (1+l)/sqrt(l)).
double test_statistic_L(const Spectrum& spec, double lambda, double w2,
                        double w4);

// Transformed analog, driven by the density functionals F = F^H, F_d = F^H_d,
// G = G^H and w4t:
//   delta~ = -log(1-lF) + (2 F_d/w2 - F) l + (G^2/(w4t-1) - F^2/2) l^2
//   m~_0   = -log(1-lF)/2 + ((w2-1) G/(w4t-1) - F/2) l + (w4t-3)(lF)^2/4
//   V~_0   = -2 log(1-lF) + (4 F_d/w2 - 2F) l + (2 G^2/(w4t-1) - F^2) l^2
struct TransformedLssModel {
  double lambda = 0.0;
  double FH = 1.0;
  double FHd = 1.0;
  double GH = 1.0;
  double w2 = 0.0;
  double w4t = 0.0;
  int k = 0;
  double m0 = 0.0;
  double mk = 0.0;
  double v0 = 0.0;
};

double rank_drift_transformed(double lambda, double FH, double FHd, double GH,
                              double w2, double w4t);

TransformedLssModel transformed_lss_model(double lambda, double FH, double FHd,
                                          double GH, double w2, double w4t,
                                          int k);

// Statistic of Algorithm 2 from the spectrum of the transformed matrix,
// together with its limiting model. Requires lambda * F < 1.
std::pair<double, TransformedLssModel> transformed_statistic_and_model(
    const Spectrum& spec_of_transformed, double lambda, double FH, double FHd,
    double GH, double w2, double w4t, int k);

// The LSS-optimal function
//   phi_lambda(x) = -log(1 - sqrt(l) x + l) + sqrt(l)(2/w2 - 1) x
//                   + l (1/(w4-1) - 1/2) x^2,
// chosen so that sum_i phi(mu_i) reproduces L_lambda term by term
// (x^2 carries the coefficient l, matching the (Tr M^2 - N) term).
std::function<double(double)> optimal_function_phi(double lambda, double w2,
                                                   double w4);

// Transformed counterpart phi~_lambda.
std::function<double(double)> optimal_function_phi_transformed(double lambda,
                                                               double FH,
                                                               double FHd,
                                                               double GH,
                                                               double w2,
                                                               double w4t);

}  // namespace wigdet

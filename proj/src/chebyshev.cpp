#include "wigdet/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wigdet/errors.hpp"

namespace wigdet {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

ChebCoeffs chebyshev_coeffs(const std::function<double(double)>& f, int lmax,
                            int min_nodes) {
  if (lmax < 0) throw config_error("lmax must be >= 0");
  const int nodes = std::max(4 * lmax + 64, min_nodes);

  // midpoint rule in theta; tau_l = (1/pi) int_0^pi cos(l theta) f(2 cos theta)
  std::vector<double> fx(static_cast<size_t>(nodes));
  std::vector<double> theta(static_cast<size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    theta[j] = (j + 0.5) * kPi / nodes;
    const double x = 2.0 * std::cos(theta[j]);
    fx[j] = f(x);
    if (!std::isfinite(fx[j])) {
      char buf[80];
      std::snprintf(buf, sizeof buf, "f is non-finite at quadrature node x=%.17g", x);
      throw domain_error(buf);
    }
  }

  ChebCoeffs coeffs;
  coeffs.lmax = lmax;
  coeffs.values.assign(static_cast<size_t>(lmax) + 1, 0.0);
  for (int l = 0; l <= lmax; ++l) {
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) acc += std::cos(l * theta[j]) * fx[j];
    coeffs.values[static_cast<size_t>(l)] = acc / nodes;
  }
  return coeffs;
}

double semicircle_average(const std::function<double(double)>& f, int nodes) {
  // weight sqrt(4-x^2)/(2 pi) = (2/pi) sin^2(theta) dtheta on x = 2 cos theta
  double acc = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double theta = (j + 0.5) * kPi / nodes;
    const double s = std::sin(theta);
    acc += f(2.0 * std::cos(theta)) * s * s;
  }
  return 2.0 * acc / nodes;
}

int default_lmax(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw domain_error("lambda must be in (0,1)");
  const double by_decay = std::ceil(std::log(1e-12) / std::log(std::sqrt(lambda)));
  return std::max(50, static_cast<int>(by_decay));
}

namespace {

struct SeriesTails {
  double mean_tail = 0.0;
  double var_tail = 0.0;
};

// Tail-ratio heuristic: bound the dropped terms of sum r^l tau_l and
// sum l tau_l^2 using the largest recent coefficient and geometric decay
// with ratio r (r = sqrt(lambda) or sqrt(lambda F)).
SeriesTails estimate_tails(const ChebCoeffs& c, double r) {
  const int L = c.lmax;
  double recent = 0.0;
  for (int l = std::max(1, L - 4); l <= L; ++l)
    recent = std::max(recent, std::fabs(c[l]));
  SeriesTails t;
  t.mean_tail = recent * std::pow(r, L + 1) / (1.0 - r);
  t.var_tail = 2.0 * (L + 1) * recent * recent / (1.0 - r * r);
  return t;
}

void check_tails(const ChebCoeffs& c, double r) {
  const SeriesTails t = estimate_tails(c, r);
  if (t.mean_tail > 1e-10 || t.var_tail > 1e-10) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "Chebyshev series truncation too coarse (mean tail %.3g, "
                  "variance tail %.3g); increase lmax",
                  t.mean_tail, t.var_tail);
    throw numeric_error(buf);
  }
}

}  // namespace

CltMoments clt_mean_variance(const std::function<double(double)>& f,
                             double lambda, double w2, double w4, int k,
                             int lmax) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw domain_error("lambda must be in (0,1)");
  if (lmax < 0) lmax = default_lmax(lambda);
  const ChebCoeffs tau = chebyshev_coeffs(f, lmax);
  const double root = std::sqrt(lambda);
  check_tails(tau, root);

  double drift = 0.0;
  double wiener = 0.0;  // 2 sum l tau_l^2
  double rl = 1.0;
  for (int l = 1; l <= lmax; ++l) {
    rl *= root;
    drift += rl * tau[l];
    wiener += 2.0 * l * tau[l] * tau[l];
  }

  CltMoments out;
  out.mean = 0.25 * (f(2.0) + f(-2.0)) - 0.5 * tau[0] + (w2 - 2.0) * tau[2] +
             (w4 - 3.0) * tau[4] + k * drift;
  out.variance = (w2 - 2.0) * tau[1] * tau[1] +
                 2.0 * (w4 - 3.0) * tau[2] * tau[2] + wiener;
  return out;
}

CltMoments clt_mean_variance_transformed(const std::function<double(double)>& f,
                                         double lambda, double FH, double FHd,
                                         double GH, double w2, double w4t,
                                         int k, int lmax) {
  const double lf = lambda * FH;
  if (!(lambda > 0.0) || !(lf < 1.0))
    throw domain_error("need 0 < lambda and lambda * F^H < 1");
  if (lmax < 0) lmax = default_lmax(lf);
  const ChebCoeffs tau = chebyshev_coeffs(f, lmax);
  const double root = std::sqrt(lf);
  check_tails(tau, root);

  double drift3 = 0.0;  // sum_{l>=3} (lambda F)^{l/2} tau_l
  double wiener = 0.0;
  double rl = 1.0;
  for (int l = 1; l <= lmax; ++l) {
    rl *= root;
    if (l >= 3) drift3 += rl * tau[l];
    wiener += 2.0 * l * tau[l] * tau[l];
  }

  CltMoments out;
  out.mean = 0.25 * (f(2.0) + f(-2.0)) - 0.5 * tau[0] +
             k * std::sqrt(lambda * FHd) * tau[1] +
             (w2 - 2.0 + k * lambda * GH) * tau[2] + (w4t - 3.0) * tau[4] +
             k * drift3;
  out.variance = (w2 - 2.0) * tau[1] * tau[1] +
                 2.0 * (w4t - 3.0) * tau[2] * tau[2] + wiener;
  return out;
}

}  // namespace wigdet

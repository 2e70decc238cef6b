#include "wigdet/lss_stats.hpp"

#include <cmath>
#include <cstdio>

#include "wigdet/errors.hpp"

namespace wigdet {

namespace {

void check_domain(double lambda, double w2, double w4) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw domain_error("lambda must be in (0,1)");
  if (!(w2 > 0.0)) throw domain_error("w2 must be > 0");
  if (!(w4 > 1.0)) throw domain_error("w4 must be > 1");
}

}  // namespace

double rank_drift(double lambda, double w2, double w4) {
  check_domain(lambda, w2, w4);
  return -std::log1p(-lambda) + (2.0 / w2 - 1.0) * lambda +
         (1.0 / (w4 - 1.0) - 0.5) * lambda * lambda;
}

LssModel lss_mean_variance(double lambda, double w2, double w4, int k) {
  check_domain(lambda, w2, w4);
  if (k < 0) throw domain_error("rank k must be >= 0");
  LssModel model;
  model.lambda = lambda;
  model.w2 = w2;
  model.w4 = w4;
  model.k = k;
  const double log_term = -std::log1p(-lambda);
  model.m0 = 0.5 * log_term + ((w2 - 1.0) / (w4 - 1.0) - 0.5) * lambda +
             0.25 * (w4 - 3.0) * lambda * lambda;
  model.v0 = 2.0 * log_term + (4.0 / w2 - 2.0) * lambda +
             (2.0 / (w4 - 1.0) - 1.0) * lambda * lambda;
  model.mk = model.m0 + k * rank_drift(lambda, w2, w4);
  return model;
}

double critical_value(double lambda, double w2, double w4, int k1, int k2) {
  if (k1 < 0 || k2 <= k1) throw domain_error("need 0 <= k1 < k2");
  const LssModel model = lss_mean_variance(lambda, w2, w4, 0);
  return model.m0 + 0.5 * (k1 + k2) * rank_drift(lambda, w2, w4);
}

double test_statistic_L(const Spectrum& spec, double lambda, double w2,
                        double w4) {
  check_domain(lambda, w2, w4);
  const int n = spec.size();
  const double root = std::sqrt(lambda);
  double log_det = 0.0;
  for (int i = 0; i < n; ++i) {
    const double arg = (1.0 + lambda) - root * spec.values(i);
    if (arg <= 0.0) {
      char buf[96];
      std::snprintf(buf, sizeof buf,
                    "eigenvalue %.17g reaches (1+lambda)/sqrt(lambda) = %.17g",
                    spec.values(i), (1.0 + lambda) / root);
      throw spectral_overflow(buf);
    }
    log_det += std::log(arg);
  }
  return -log_det + 0.5 * lambda * n + root * (2.0 / w2 - 1.0) * spec.sum() +
         lambda * (1.0 / (w4 - 1.0) - 0.5) * (spec.sum_squares() - n);
}

double rank_drift_transformed(double lambda, double FH, double FHd, double GH,
                              double w2, double w4t) {
  return -std::log1p(-lambda * FH) + (2.0 * FHd / w2 - FH) * lambda +
         (GH * GH / (w4t - 1.0) - 0.5 * FH * FH) * lambda * lambda;
}

TransformedLssModel transformed_lss_model(double lambda, double FH, double FHd,
                                          double GH, double w2, double w4t,
                                          int k) {
  if (!(lambda >= 0.0)) throw domain_error("lambda must be >= 0");
  if (!(lambda * FH < 1.0))
    throw domain_error("lambda * F^H must be < 1");
  if (!(w2 > 0.0)) throw domain_error("w2 must be > 0");
  if (!(w4t > 1.0)) throw domain_error("w4t must be > 1");
  if (k < 0) throw domain_error("rank k must be >= 0");

  TransformedLssModel model;
  model.lambda = lambda;
  model.FH = FH;
  model.FHd = FHd;
  model.GH = GH;
  model.w2 = w2;
  model.w4t = w4t;
  model.k = k;
  const double lf = lambda * FH;
  const double log_term = -std::log1p(-lf);
  model.m0 = 0.5 * log_term +
             ((w2 - 1.0) * GH / (w4t - 1.0) - 0.5 * FH) * lambda +
             0.25 * (w4t - 3.0) * lf * lf;
  model.v0 = 2.0 * log_term + (4.0 * FHd / w2 - 2.0 * FH) * lambda +
             (2.0 * GH * GH / (w4t - 1.0) - FH * FH) * lambda * lambda;
  model.mk = model.m0 + k * rank_drift_transformed(lambda, FH, FHd, GH, w2, w4t);
  return model;
}

std::pair<double, TransformedLssModel> transformed_statistic_and_model(
    const Spectrum& spec_of_transformed, double lambda, double FH, double FHd,
    double GH, double w2, double w4t, int k) {
  TransformedLssModel model =
      transformed_lss_model(lambda, FH, FHd, GH, w2, w4t, k);

  const int n = spec_of_transformed.size();
  const double lf = lambda * FH;
  const double root = std::sqrt(lf);
  double log_det = 0.0;
  for (int i = 0; i < n; ++i) {
    const double arg = (1.0 + lf) - root * spec_of_transformed.values(i);
    if (arg <= 0.0) {
      char buf[112];
      std::snprintf(
          buf, sizeof buf,
          "transformed eigenvalue %.17g reaches (1+lF)/sqrt(lF) = %.17g",
          spec_of_transformed.values(i), (1.0 + lf) / root);
      throw spectral_overflow(buf);
    }
    log_det += std::log(arg);
  }
  const double stat =
      -log_det + 0.5 * lf * n +
      std::sqrt(lambda) * (2.0 * std::sqrt(FHd) / w2 - std::sqrt(FH)) *
          spec_of_transformed.sum() +
      lambda * (GH / (w4t - 1.0) - 0.5 * FH) *
          (spec_of_transformed.sum_squares() - n);
  return {stat, model};
}

std::function<double(double)> optimal_function_phi(double lambda, double w2,
                                                   double w4) {
  check_domain(lambda, w2, w4);
  const double root = std::sqrt(lambda);
  const double c1 = root * (2.0 / w2 - 1.0);
  const double c2 = lambda * (1.0 / (w4 - 1.0) - 0.5);
  return [lambda, root, c1, c2](double x) {
    const double arg = 1.0 - root * x + lambda;
    if (arg <= 0.0) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "phi_lambda undefined at x=%.17g", x);
      throw domain_error(buf);
    }
    return -std::log(arg) + c1 * x + c2 * x * x;
  };
}

std::function<double(double)> optimal_function_phi_transformed(double lambda,
                                                               double FH,
                                                               double FHd,
                                                               double GH,
                                                               double w2,
                                                               double w4t) {
  const double lf = lambda * FH;
  if (!(lambda > 0.0) || !(lf < 1.0))
    throw domain_error("need 0 < lambda and lambda * F^H < 1");
  const double root = std::sqrt(lf);
  const double c1 = std::sqrt(lambda) * (2.0 * std::sqrt(FHd) / w2 - std::sqrt(FH));
  const double c2 = lambda * (GH / (w4t - 1.0) - 0.5 * FH);
  return [lf, root, c1, c2](double x) {
    const double arg = 1.0 - root * x + lf;
    if (arg <= 0.0) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "phi~_lambda undefined at x=%.17g", x);
      throw domain_error(buf);
    }
    return -std::log(arg) + c1 * x + c2 * x * x;
  };
}

}  // namespace wigdet

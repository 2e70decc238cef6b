#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wigdet/chebyshev.hpp"
#include "wigdet/errors.hpp"
#include "wigdet/lss_stats.hpp"
#include "wigdet/transform.hpp"

using namespace wigdet;

namespace {

double cheb_t(int n, double t) {
  if (n == 0) return 1.0;
  double a = 1.0, b = t;
  for (int i = 2; i <= n; ++i) {
    const double c = 2.0 * t * b - a;
    a = b;
    b = c;
  }
  return b;
}

const std::pair<double, double> kNoiseParams[] = {{2.0, 3.0}, {1.0, 5.0}};

}  // namespace

TEST_CASE("chebyshev orthogonality up to degree 20") {
  for (int n = 1; n <= 20; ++n) {
    const ChebCoeffs c =
        chebyshev_coeffs([n](double x) { return cheb_t(n, x / 2.0); }, 24);
    for (int l = 0; l <= 24; ++l) {
      if (l == n)
        CHECK(std::fabs(c[l] - 0.5) < 1e-10);
      else
        CHECK(std::fabs(c[l]) < 1e-10);
    }
  }
}

TEST_CASE("coefficients of 1, x, and T3(x/2)") {
  const ChebCoeffs ones = chebyshev_coeffs([](double) { return 1.0; }, 8);
  CHECK(std::fabs(ones[0] - 1.0) < 1e-12);
  for (int l = 1; l <= 8; ++l) CHECK(std::fabs(ones[l]) < 1e-12);

  const ChebCoeffs lin = chebyshev_coeffs([](double x) { return x; }, 8);
  CHECK(std::fabs(lin[1] - 1.0) < 1e-12);
  CHECK(std::fabs(lin[0]) < 1e-12);
  for (int l = 2; l <= 8; ++l) CHECK(std::fabs(lin[l]) < 1e-12);

  const ChebCoeffs t3 = chebyshev_coeffs([](double x) { return cheb_t(3, x / 2); }, 8);
  CHECK(std::fabs(t3[3] - 0.5) < 1e-12);
  for (int l : {0, 1, 2, 4, 5, 6, 7, 8}) CHECK(std::fabs(t3[l]) < 1e-12);
}

TEST_CASE("semicircle averages: moments of the semicircle law") {
  CHECK(semicircle_average([](double) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(semicircle_average([](double x) { return x; })) < 1e-12);
  CHECK(semicircle_average([](double x) { return x * x; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(semicircle_average([](double x) { return x * x * x * x; }) ==
        doctest::Approx(2.0).epsilon(1e-12));  // Catalan number C_2

  // identity: integral against the semicircle equals tau_0 - tau_2
  const auto f = [](double x) { return std::exp(0.5 * x) + 0.3 * x * x; };
  const ChebCoeffs c = chebyshev_coeffs(f, 16);
  CHECK(semicircle_average(f) == doctest::Approx(c[0] - c[2]).epsilon(1e-11));
}

TEST_CASE("clt moments of elementary functions") {
  for (auto [w2, w4] : kNoiseParams) {
    const CltMoments lin =
        clt_mean_variance([](double x) { return x; }, 0.5, w2, w4, 0);
    CHECK(std::fabs(lin.mean) < 1e-10);
    CHECK(lin.variance == doctest::Approx(w2).epsilon(1e-10));

    const CltMoments ones =
        clt_mean_variance([](double) { return 1.0; }, 0.5, w2, w4, 2);
    CHECK(std::fabs(ones.mean) < 1e-10);
    CHECK(std::fabs(ones.variance) < 1e-10);
  }
}

TEST_CASE("clt of phi_lambda reproduces the closed forms to 1e-8") {
  for (auto [w2, w4] : kNoiseParams) {
    for (double lambda = 0.1; lambda < 0.95; lambda += 0.1) {
      const auto phi = optimal_function_phi(lambda, w2, w4);
      const double delta = rank_drift(lambda, w2, w4);
      for (int k = 0; k <= 2; ++k) {
        const CltMoments clt = clt_mean_variance(phi, lambda, w2, w4, k);
        const LssModel model = lss_mean_variance(lambda, w2, w4, k);
        CHECK(clt.mean == doctest::Approx(model.mk).epsilon(1e-8));
        CHECK(clt.variance == doctest::Approx(model.v0).epsilon(1e-8));
        if (k > 0) {
          const CltMoments prev = clt_mean_variance(phi, lambda, w2, w4, k - 1);
          CHECK(clt.mean - prev.mean == doctest::Approx(delta).epsilon(1e-8));
        }
      }
    }
  }
}

TEST_CASE("phi_lambda maximizes the standardized mean separation") {
  const std::function<double(double)> candidates[] = {
      [](double x) { return x; },
      [](double x) { return x * x; },
      [](double x) { return x * x * x; },
      [](double x) { return std::exp(0.5 * x); },
  };
  for (auto [w2, w4] : kNoiseParams) {
    for (double lambda : {0.2, 0.5, 0.7}) {
      const LssModel m1 = lss_mean_variance(lambda, w2, w4, 1);
      const LssModel m3 = lss_mean_variance(lambda, w2, w4, 3);
      const double best = std::fabs(m3.mk - m1.mk) / std::sqrt(m1.v0);
      for (const auto& f : candidates) {
        const CltMoments a = clt_mean_variance(f, lambda, w2, w4, 1);
        const CltMoments b = clt_mean_variance(f, lambda, w2, w4, 3);
        const double ratio = std::fabs(b.mean - a.mean) / std::sqrt(a.variance);
        CHECK(ratio <= best + 1e-9);
      }
    }
  }
}

TEST_CASE("transformed clt of phi~ matches the transformed closed forms") {
  const DensityFunctionals sech =
      fisher_functionals(EntryDensity::sech(), EntryDensity::sech());
  const double w2 = 1.0;
  for (double lambda : {0.1, 0.3, 0.5, 0.7}) {
    const auto phi = optimal_function_phi_transformed(lambda, sech.FH, sech.FHd,
                                                      sech.GH, w2, sech.w4t);
    for (int k = 0; k <= 2; ++k) {
      const CltMoments clt = clt_mean_variance_transformed(
          phi, lambda, sech.FH, sech.FHd, sech.GH, w2, sech.w4t, k);
      const TransformedLssModel model = transformed_lss_model(
          lambda, sech.FH, sech.FHd, sech.GH, w2, sech.w4t, k);
      CHECK(clt.mean == doctest::Approx(model.mk).epsilon(1e-8));
      CHECK(clt.variance == doctest::Approx(model.v0).epsilon(1e-8));
    }
  }
}

TEST_CASE("transformed optimality inequality") {
  const DensityFunctionals sech =
      fisher_functionals(EntryDensity::sech(), EntryDensity::sech());
  const double w2 = 1.0, lambda = 0.4;
  const auto m1 =
      transformed_lss_model(lambda, sech.FH, sech.FHd, sech.GH, w2, sech.w4t, 1);
  const auto m3 =
      transformed_lss_model(lambda, sech.FH, sech.FHd, sech.GH, w2, sech.w4t, 3);
  const double best = std::fabs(m3.mk - m1.mk) / std::sqrt(m1.v0);
  const std::function<double(double)> candidates[] = {
      [](double x) { return x; },
      [](double x) { return x * x; },
      [](double x) { return std::exp(0.5 * x); },
  };
  for (const auto& f : candidates) {
    const CltMoments a = clt_mean_variance_transformed(f, lambda, sech.FH, sech.FHd,
                                                       sech.GH, w2, sech.w4t, 1);
    const CltMoments b = clt_mean_variance_transformed(f, lambda, sech.FH, sech.FHd,
                                                       sech.GH, w2, sech.w4t, 3);
    CHECK(std::fabs(b.mean - a.mean) / std::sqrt(a.variance) <= best + 1e-9);
  }
}

TEST_CASE("default lmax grows as lambda approaches 1") {
  CHECK(default_lmax(0.1) == 50);
  CHECK(default_lmax(0.5) >= 79);
  CHECK(default_lmax(0.9) >= 500);
}

TEST_CASE("coarse truncation is reported, not silently accepted") {
  const auto phi = optimal_function_phi(0.9, 2.0, 3.0);
  CHECK_THROWS_AS(clt_mean_variance(phi, 0.9, 2.0, 3.0, 1, /*lmax=*/6),
                  numeric_error);
}

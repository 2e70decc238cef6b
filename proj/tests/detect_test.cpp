#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "wigdet/detect.hpp"
#include "wigdet/errors.hpp"
#include "wigdet/quadrature.hpp"
#include "wigdet/rng.hpp"

using namespace wigdet;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// independent erfc oracle: (2/sqrt(pi)) * integral_x^{x+40} exp(-t^2) dt
double erfc_oracle(double x) {
  const double tail = adaptive_simpson(
      [](double t) { return std::exp(-t * t); }, x, x + 40.0, 1e-14);
  return 2.0 / std::sqrt(kPi) * tail;
}

const DensityFunctionals kSechFuncs{kPi * kPi / 8.0, kPi * kPi / 8.0,
                                    kPi * kPi / 16.0, 1.5};
const DensityFunctionals kGaussFuncs{1.0, 1.0, 1.0, 3.0};

}  // namespace

TEST_CASE("erfc agrees with the integral oracle at 20 points") {
  for (int i = 0; i < 20; ++i) {
    const double x = 0.15 * i;
    CHECK(std::erfc(x) == doctest::Approx(erfc_oracle(x)).epsilon(1e-12));
  }
}

TEST_CASE("decision rule: threshold comparisons and the tie") {
  const double thr = 0.6931471805599453;  // critical_value(0.5, GOE, 0, 1)
  CHECK(critical_value(0.5, 2.0, 3.0, 0, 1) == doctest::Approx(thr).epsilon(1e-15));

  CHECK(decide_hypothesis(0.60, thr).decision == Decision::H1);
  CHECK(decide_hypothesis(0.80, thr).decision == Decision::H2);
  CHECK(decide_hypothesis(thr, thr).decision == Decision::H1);  // tie -> H1

  // monotone flip: once the statistic exceeds the threshold it stays H2
  bool seen_h2 = false;
  for (double s = 0.0; s < 1.4; s += 0.01) {
    const bool is_h2 = decide_hypothesis(s, thr).decision == Decision::H2;
    if (seen_h2) CHECK(is_h2);
    seen_h2 = is_h2;
  }
}

TEST_CASE("hypothesis_test matches a manual recompute") {
  StreamRng rng(41, 0);
  const HypothesisPair hyp{0, 2};
  for (int rep = 0; rep < 20; ++rep) {
    const DataMatrix m = sample_wigner(NoiseSpec::goe(), 64, rng);
    const TestOutcome out = hypothesis_test(m, 0.3, 2.0, 3.0, hyp);
    REQUIRE(!out.aborted);  // (1+0.3)/sqrt(0.3) ~ 2.37 is far above the edge
    const double stat = test_statistic_L(eigenvalues(m), 0.3, 2.0, 3.0);
    const double thr = critical_value(0.3, 2.0, 3.0, 0, 2);
    CHECK(out.statistic == stat);
    CHECK(out.threshold == thr);
    CHECK((out.decision == Decision::H1) == (stat <= thr));
  }
}

TEST_CASE("spectral overflow: aborted outcome with the H2 fallback") {
  // a planted eigenvalue far above (1+lambda)/sqrt(lambda) sends the
  // statistic to +infinity, which can only mean the larger rank
  DataMatrix m;
  m.n = 8;
  m.entries = Eigen::MatrixXd::Zero(8, 8);
  m.entries(0, 0) = 5.0;
  const TestOutcome out = hypothesis_test(m, 0.5, 2.0, 3.0, HypothesisPair{0, 1});
  CHECK(out.aborted);
  CHECK(out.decision == Decision::H2);
  CHECK(std::isinf(out.statistic));
  CHECK(out.threshold == critical_value(0.5, 2.0, 3.0, 0, 1));
}

TEST_CASE("transformed test with gaussian densities equals the plain test") {
  StreamRng rng(42, 0);
  const auto g = EntryDensity::standard_gaussian();
  const HypothesisPair hyp{1, 3};
  for (int rep = 0; rep < 10; ++rep) {
    const DataMatrix m = sample_wigner(NoiseSpec::goe(), 48, rng);
    const TestOutcome plain = hypothesis_test(m, 0.25, 2.0, 3.0, hyp);
    const TestOutcome trans =
        hypothesis_test_transformed(m, 0.25, 2.0, g, g, hyp, kGaussFuncs);
    REQUIRE(!plain.aborted);
    REQUIRE(!trans.aborted);
    CHECK(trans.statistic == doctest::Approx(plain.statistic).epsilon(1e-9));
    CHECK(trans.threshold == doctest::Approx(plain.threshold).epsilon(1e-12));
    CHECK(trans.decision == plain.decision);
  }
}

TEST_CASE("transformed test refuses lambda F >= 1") {
  StreamRng rng(43, 0);
  const DataMatrix m = sample_wigner(NoiseSpec::sech(), 16, rng);
  const auto g = EntryDensity::sech();
  CHECK_THROWS_AS(
      hypothesis_test_transformed(m, 0.9, 1.0, g, g, HypothesisPair{1, 3}, kSechFuncs),
      domain_error);  // 0.9 * pi^2/8 > 1
}

TEST_CASE("rank estimator hits the stated examples") {
  const double lambda = 0.5, w2 = 2.0, w4 = 3.0;
  const double m0 = lss_mean_variance(lambda, w2, w4, 0).m0;
  const double delta = rank_drift(lambda, w2, w4);

  CHECK(rank_from_statistic(m0 + 3 * delta, lambda, w2, w4).kappa == 3);
  // half-integer kappa' rounds down
  CHECK(rank_from_statistic(m0 + 1.5 * delta, lambda, w2, w4).kappa == 1);
  CHECK(rank_from_statistic(m0 - 0.2, lambda, w2, w4).kappa == 0);
  // boundary (m0+m1)/2 itself goes to 0
  CHECK(rank_from_statistic(m0 + 0.5 * delta, lambda, w2, w4).kappa == 0);
  // bounded range clamps
  CHECK(rank_from_statistic(m0 + 9.4 * delta, lambda, w2, w4, 4).kappa == 4);
}

TEST_CASE("rounding rule agrees with argmin over 1e5 synthetic statistics") {
  const double lambda = 0.37, w2 = 1.0, w4 = 5.0;
  const double m0 = lss_mean_variance(lambda, w2, w4, 0).m0;
  const double delta = rank_drift(lambda, w2, w4);
  StreamRng rng(44, 0);
  for (int rep = 0; rep < 100000; ++rep) {
    const double stat = m0 + (rng.next_unit() * 30.0 - 5.0) * delta;
    const int kappa = rank_from_statistic(stat, lambda, w2, w4).kappa;
    // independent oracle: nearest nonnegative k with half-ties downward
    int best_k = 0;
    double best = std::fabs(stat - m0);
    for (int k = 1; k <= 40; ++k) {
      const double d = std::fabs(stat - (m0 + k * delta));
      if (d < best) {
        best = d;
        best_k = k;
      }
    }
    CHECK(kappa == best_k);
  }
}

TEST_CASE("limiting error: GOE values and structure") {
  const HypothesisPair h12{1, 2};
  CHECK(limiting_error(h12, 0.5, 2.0, 3.0) ==
        doctest::Approx(erfc_oracle(0.25 * std::sqrt(-std::log(0.5)))).epsilon(1e-12));
  CHECK(limiting_error(h12, 0.5, 2.0, 3.0) == doctest::Approx(0.7684).epsilon(2e-4));
  CHECK(limiting_error(h12, 1e-12, 2.0, 3.0) == doctest::Approx(1.0).epsilon(1e-6));

  // doubling k2-k1 doubles the erfc argument
  for (double lambda : {0.2, 0.5}) {
    const double z = 0.25 * std::sqrt(rank_drift(lambda, 2.0, 3.0));
    CHECK(limiting_error(HypothesisPair{1, 3}, lambda, 2.0, 3.0) ==
          doctest::Approx(std::erfc(2 * z)).epsilon(1e-12));
    CHECK(limiting_error(HypothesisPair{0, 4}, lambda, 2.0, 3.0) ==
          doctest::Approx(std::erfc(4 * z)).epsilon(1e-12));
  }
}

TEST_CASE("limiting error is monotone in lambda and in k2-k1") {
  double prev = 2.0;
  for (double lambda = 0.05; lambda < 0.95; lambda += 0.05) {
    const double e = limiting_error(HypothesisPair{0, 1}, lambda, 1.0, 5.0);
    CHECK(e < prev);
    prev = e;
  }
  prev = 2.0;
  for (int k2 = 1; k2 <= 6; ++k2) {
    const double e = limiting_error(HypothesisPair{0, k2}, 0.3, 2.0, 3.0);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("optimality: w4=3 limiting error equals the LR limit to 1e-12") {
  for (double lambda : {0.1, 0.25, 0.4, 0.5})
    for (double w2 : {1.0, 2.0, 4.0})
      for (auto [k1, k2] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{1, 4}}) {
        const HypothesisPair hyp{k1, k2};
        const LrLimit lr = lr_limit_parameters(hyp, lambda, w2);
        CHECK(limiting_error(hyp, lambda, w2, 3.0) ==
              doctest::Approx(lr.limit_error).epsilon(1e-12));
      }
}

TEST_CASE("transformed limiting error: sech closed form and dominance") {
  for (double lambda = 0.05; lambda <= 0.6; lambda += 0.05) {
    for (int k2 : {2, 3}) {
      const HypothesisPair hyp{1, k2};
      const double expect = std::erfc(
          (k2 - 1) / 4.0 *
          std::sqrt(-std::log1p(-kPi * kPi * lambda / 8.0) + kPi * kPi * lambda / 8.0));
      CHECK(limiting_error_transformed(hyp, lambda, kSechFuncs, 1.0) ==
            doctest::Approx(expect).epsilon(1e-12));
      // strict improvement over the untransformed test
      CHECK(limiting_error_transformed(hyp, lambda, kSechFuncs, 1.0) <
            limiting_error(hyp, lambda, 1.0, 5.0));
    }
  }
}

TEST_CASE("transformed limiting error with gaussian functionals is the plain one") {
  for (double lambda : {0.1, 0.3, 0.5})
    CHECK(limiting_error_transformed(HypothesisPair{0, 2}, lambda, kGaussFuncs, 2.0) ==
          doctest::Approx(limiting_error(HypothesisPair{0, 2}, lambda, 2.0, 3.0))
              .epsilon(1e-12));
}

TEST_CASE("rank-estimation limiting error") {
  // uniform k in {0..4}: prefactor 0.8
  for (double lambda : {0.1, 0.3, 0.6}) {
    const double expect =
        0.8 * std::erfc(0.25 * std::sqrt(-std::log1p(-lambda)));
    CHECK(limiting_error_rank(lambda, 2.0, 3.0, 0.2, 0.2) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  // the lambda = 0.025 grid point of the rank experiment
  CHECK(limiting_error_rank(0.025, 2.0, 3.0, 0.2, 0.2) ==
        doctest::Approx(0.764).epsilon(2e-3));
  // degenerate prior: one-sided error
  CHECK(limiting_error_rank(0.4, 2.0, 3.0, 1.0) ==
        doctest::Approx(0.5 * std::erfc(0.25 * std::sqrt(rank_drift(0.4, 2.0, 3.0))))
            .epsilon(1e-12));
  // lambda -> 0: 1 - p0/2
  CHECK(limiting_error_rank(1e-12, 2.0, 3.0, 0.2, 0.2) ==
        doctest::Approx(0.8).epsilon(1e-6));
  CHECK_THROWS_AS(limiting_error_rank(0.3, 2.0, 3.0, 1.4), domain_error);
}

TEST_CASE("log-LR limit parameters") {
  const LrLimit lim = lr_limit_parameters(HypothesisPair{0, 1}, 0.5, 2.0);
  CHECK(lim.mu == doctest::Approx(0.17328679513998632).epsilon(1e-12));
  CHECK(lim.limit_error == doctest::Approx(0.7684).epsilon(2e-4));
  // the erfc argument is exactly sqrt(mu)/2
  CHECK(lim.limit_error ==
        doctest::Approx(erfc_oracle(0.5 * std::sqrt(lim.mu))).epsilon(1e-12));

  // w2 = infinity drops the diagonal correction
  const double inf = std::numeric_limits<double>::infinity();
  const LrLimit winf = lr_limit_parameters(HypothesisPair{0, 2}, 0.3, inf);
  CHECK(winf.mu == doctest::Approx((-std::log1p(-0.3) - 0.3)).epsilon(1e-12));

  // the small-SNR guard is enforced and configurable
  CHECK_THROWS_AS(lr_limit_parameters(HypothesisPair{0, 1}, 0.6, 2.0), domain_error);
  CHECK_NOTHROW(lr_limit_parameters(HypothesisPair{0, 1}, 0.6, 2.0, 0.7));
  CHECK_THROWS_AS(lr_limit_parameters(HypothesisPair{1, 1}, 0.3, 2.0), config_error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wigdet/detect.hpp"
#include "wigdet/errors.hpp"
#include "wigdet/lr_oracle.hpp"

using namespace wigdet;

namespace {

// oracle: average exp(-H) over explicitly enumerated sign matrices using the
// reference hamiltonian(), independent of the bit-twiddling fast path
double log_likelihood_oracle(const GaussianModelY& y, int k) {
  if (k == 0) return 0.0;
  const int bits = y.n * k;
  const std::uint64_t total = 1ULL << bits;
  long double acc = 0.0L;
  Eigen::MatrixXi x(y.n, k);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    for (int i = 0; i < y.n; ++i)
      for (int a = 0; a < k; ++a)
        x(i, a) = ((idx >> (i * k + a)) & 1) ? 1 : -1;
    acc += std::exp(static_cast<long double>(-hamiltonian(x, y)));
  }
  return static_cast<double>(std::log(acc / total));
}

GaussianModelY sample_y(int n, int k, double lambda, double w2, std::uint64_t seed,
                        std::uint64_t stream) {
  StreamRng rng(seed, stream);
  return sample_gaussian_model(n, k, lambda, w2, rng);
}

}  // namespace

TEST_CASE("hamiltonian vanishes at lambda = 0") {
  const GaussianModelY y = sample_y(5, 1, 0.0, 2.0, 51, 0);
  Eigen::MatrixXi x(5, 1);
  x << 1, -1, 1, 1, -1;
  CHECK(hamiltonian(x, y) == 0.0);
}

TEST_CASE("hamiltonian closed forms at n=1 and n=2") {
  // n=1, k=1: -H = (sqrt(l) Y11 - l/2) / w2, independent of the sign
  for (double w2 : {1.0, 2.0}) {
    GaussianModelY y = sample_y(1, 0, 0.35, w2, 52, 0);
    Eigen::MatrixXi plus(1, 1), minus(1, 1);
    plus << 1;
    minus << -1;
    const double expect = -(std::sqrt(0.35) * y.Y(0, 0) - 0.35 / 2.0) / w2;
    CHECK(hamiltonian(plus, y) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(hamiltonian(minus, y) == doctest::Approx(expect).epsilon(1e-14));
  }

  // n=2, k=1: -H = sqrt(l/2) Y12 x1 x2 - l/4 + (1/w2)(sqrt(l/2)(Y11+Y22) - l/2)
  const double l = 0.3, w2 = 2.0;
  GaussianModelY y = sample_y(2, 1, l, w2, 53, 0);
  Eigen::MatrixXi x(2, 1);
  x << 1, -1;
  const double expect =
      -(std::sqrt(l / 2) * y.Y(0, 1) * (1) * (-1) - l / 4.0 +
        (std::sqrt(l / 2) * (y.Y(0, 0) + y.Y(1, 1)) - l / 2.0) / w2);
  CHECK(hamiltonian(x, y) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("hamiltonian is invariant under per-column sign flips") {
  const GaussianModelY y = sample_y(6, 2, 0.4, 2.0, 54, 0);
  StreamRng rng(54, 1);
  Eigen::MatrixXi x(6, 2);
  for (int i = 0; i < 6; ++i)
    for (int a = 0; a < 2; ++a) x(i, a) = rng.next_sign();
  const double h = hamiltonian(x, y);
  Eigen::MatrixXi flipped = x;
  flipped.col(1) *= -1;
  CHECK(hamiltonian(flipped, y) == doctest::Approx(h).epsilon(1e-13));
  flipped.col(0) *= -1;
  CHECK(hamiltonian(flipped, y) == doctest::Approx(h).epsilon(1e-13));
}

TEST_CASE("enumeration fast path equals the reference hamiltonian average") {
  for (auto [n, k] : {std::pair{4, 1}, std::pair{3, 2}, std::pair{5, 1},
                      std::pair{2, 3}}) {
    const GaussianModelY y = sample_y(n, k, 0.45, 2.0, 55, n * 10 + k);
    CHECK(log_likelihood(y, k) ==
          doctest::Approx(log_likelihood_oracle(y, k)).epsilon(1e-11));
  }
}

TEST_CASE("likelihood basics") {
  const GaussianModelY y0 = sample_y(6, 1, 0.0, 2.0, 56, 0);
  CHECK(log_likelihood(y0, 0) == 0.0);
  CHECK(log_likelihood(y0, 1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_likelihood(y0, 2) == doctest::Approx(0.0).epsilon(1e-14));

  // n=1, k=1, w2=2: log L = (sqrt(l) Y11 - l/2) / 2
  const double l = 0.3;
  const GaussianModelY y1 = sample_y(1, 1, l, 2.0, 57, 0);
  CHECK(log_likelihood(y1, 1) ==
        doctest::Approx((std::sqrt(l) * y1.Y(0, 0) - l / 2.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("log-LR trivial cases and capacity bound") {
  const GaussianModelY y = sample_y(8, 1, 0.3, 2.0, 58, 0);
  const LrResult same = log_lr(y, 1, 1);
  CHECK(same.log_lr == 0.0);

  const GaussianModelY yz = sample_y(8, 2, 0.0, 2.0, 58, 1);
  CHECK(log_lr(yz, 0, 2).log_lr == doctest::Approx(0.0).epsilon(1e-13));

  CHECK_THROWS_AS(log_likelihood(sample_y(13, 2, 0.2, 2.0, 58, 2), 2),
                  capacity_error);
}

TEST_CASE("to_gaussian_model rescales a spiked Wigner draw") {
  StreamRng rng(59, 0);
  const DataMatrix h = sample_wigner(NoiseSpec::goe(), 8, rng);
  const SpikeMatrix x = sample_spike(SpikePrior::rademacher(), 8, 1, rng);
  const DataMatrix m = assemble(x, 0.3, h);
  const GaussianModelY y = to_gaussian_model(m);
  CHECK(y.n == 8);
  CHECK(y.lambda == 0.3);
  CHECK((y.Y - std::sqrt(8.0) * m.entries).cwiseAbs().maxCoeff() < 1e-14);
  // the rescaled spike columns are +-1 vectors, so Y matches the
  // sqrt(N)-scaled convention with X* = sqrt(N) X
  for (int i = 0; i < 8; ++i)
    CHECK(std::fabs(std::sqrt(8.0) * x.columns(i, 0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("martingale property: E_H1[L] = 1 within 3 MC standard errors") {
  const int n = 8, trials = 2000;
  const double lambda = 0.3, w2 = 2.0;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const GaussianModelY y = sample_y(n, 0, lambda, w2, 60, static_cast<std::uint64_t>(t));
    const double lr = std::exp(log_lr(y, 0, 1).log_lr);
    sum += lr;
    sum_sq += lr * lr;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
  CHECK(std::fabs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("log-LR drift matches the N(+-mu, 2mu) signature loosely") {
  const int n = 12, trials = 600;
  const double lambda = 0.4, w2 = 2.0;
  const double mu = lr_limit_parameters(HypothesisPair{0, 1}, lambda, w2).mu;

  double mean[2] = {0, 0}, var[2] = {0, 0};
  for (int arm = 0; arm < 2; ++arm) {
    std::vector<double> lrs;
    for (int t = 0; t < trials; ++t) {
      const GaussianModelY y =
          sample_y(n, arm == 0 ? 0 : 1, lambda, w2, 61 + arm,
                   static_cast<std::uint64_t>(t));
      lrs.push_back(log_lr(y, 0, 1).log_lr);
    }
    for (double v : lrs) mean[arm] += v;
    mean[arm] /= trials;
    for (double v : lrs) var[arm] += (v - mean[arm]) * (v - mean[arm]);
    var[arm] /= trials - 1;
  }

  CHECK(mean[0] < 0.0);
  CHECK(mean[1] > 0.0);
  // H2 mean ~ +mu, H1 mean ~ -mu within 50% relative
  CHECK(std::fabs(mean[1] - mu) <= 0.5 * mu);
  CHECK(std::fabs(-mean[0] - mu) <= 0.5 * mu);
  CHECK(std::fabs(mean[1] + mean[0]) <= 0.5 * std::fabs(mean[1]));
  // variance ~ 2 |mean|
  for (int arm = 0; arm < 2; ++arm)
    CHECK(std::fabs(var[arm] - 2.0 * std::fabs(mean[arm])) <=
          0.5 * 2.0 * std::fabs(mean[arm]));
}

TEST_CASE("MC test error: exact at lambda=0, monotone in k2") {
  CHECK(lr_test_error_mc(6, 0, 1, 0.0, 2.0, 200, 62) == 1.0);

  const double e1 = lr_test_error_mc(8, 0, 1, 0.45, 2.0, 400, 63);
  const double e2 = lr_test_error_mc(8, 0, 2, 0.45, 2.0, 400, 63);
  const double slack = 3.0 * std::sqrt(2.0 * 0.25 / 400.0);
  CHECK(e2 < e1 + slack);
  // and both sit in the sensible range
  CHECK(e1 > 0.3);
  CHECK(e1 < 1.2);
  CHECK(e2 > 0.2);
  CHECK(e2 < 1.0);
}

TEST_CASE("MC error is reproducible and worker-count independent") {
  const double a = lr_test_error_mc(8, 0, 1, 0.3, 2.0, 100, 64);
  const double b = lr_test_error_mc(8, 0, 1, 0.3, 2.0, 100, 64);
  CHECK(a == b);
}

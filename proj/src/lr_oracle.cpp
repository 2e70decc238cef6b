#include "wigdet/lr_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "wigdet/errors.hpp"
#include "wigdet/parallel.hpp"

namespace wigdet {

GaussianModelY to_gaussian_model(const DataMatrix& m) {
  GaussianModelY y;
  y.n = m.n;
  y.Y = std::sqrt(static_cast<double>(m.n)) * m.entries;
  y.lambda = m.meta.lambda;
  return y;
}

GaussianModelY sample_gaussian_model(int n, int k, double lambda, double w2,
                                     StreamRng& rng) {
  if (n < 1) throw config_error("n must be >= 1");
  if (k < 0) throw config_error("k must be >= 0");
  if (!(w2 > 0.0)) throw config_error("w2 must be > 0");

  Eigen::MatrixXd spike(n, k);
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < n; ++i)
      spike(i, c) = static_cast<double>(rng.next_sign());

  GaussianModelY y;
  y.n = n;
  y.lambda = lambda;
  y.w2 = w2;
  y.Y.resize(n, n);
  const double diag_sd = std::sqrt(w2);
  for (int i = 0; i < n; ++i) {
    y.Y(i, i) = diag_sd * rng.next_normal();
    for (int j = i + 1; j < n; ++j) {
      y.Y(i, j) = rng.next_normal();
      y.Y(j, i) = y.Y(i, j);
    }
  }
  if (k > 0 && lambda > 0.0) {
    const double scale = std::sqrt(lambda / n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double s = scale * spike.row(i).dot(spike.row(j));
        y.Y(i, j) += s;
        if (j != i) y.Y(j, i) = y.Y(i, j);
      }
  }
  return y;
}

double hamiltonian(const Eigen::MatrixXi& x_signs, const GaussianModelY& y) {
  const int n = y.n;
  const int k = static_cast<int>(x_signs.cols());
  if (x_signs.rows() != n) throw config_error("sign matrix has wrong row count");
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a)
      if (x_signs(i, a) != 1 && x_signs(i, a) != -1)
        throw config_error("sign matrix entries must be +-1");

  // Written out exactly as the posterior Hamiltonian, term by term; the
  // enumeration below uses an algebraically reduced form and is checked
  // against this one in the tests.
  const double c1 = std::sqrt(y.lambda / n);
  const double c2 = y.lambda / (2.0 * n);
  double minus_h = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int a = 0; a < k; ++a) {
        const double xx = x_signs(i, a) * x_signs(j, a);
        double inner = 0.0;
        for (int b = 0; b < k; ++b) inner += x_signs(i, b) * x_signs(j, b);
        minus_h += c1 * y.Y(i, j) * xx - c2 * xx * inner;
      }
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a) {
      const double x2 = x_signs(i, a) * x_signs(i, a);
      double inner = 0.0;
      for (int b = 0; b < k; ++b) inner += x_signs(i, b) * x_signs(i, b);
      minus_h += (c1 * y.Y(i, i) * x2 - c2 * x2 * inner) / y.w2;
    }
  return -minus_h;
}

double log_likelihood(const GaussianModelY& y, int k) {
  if (k < 0) throw config_error("k must be >= 0");
  if (k == 0) return 0.0;  // empty integral: L = 1
  const int n = y.n;
  const long long bits = static_cast<long long>(n) * k;
  if (bits > kMaxEnumerationBits) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "enumeration needs 2^%lld sign matrices; bound is 2^%d", bits,
                  kMaxEnumerationBits);
    throw capacity_error(buf);
  }

  const double c1 = std::sqrt(y.lambda / n);
  const double c2 = y.lambda / (2.0 * n);
  // Rademacher entries square to 1, so the diagonal part is constant:
  const double diag_const = (k / y.w2) * (c1 * y.Y.trace() - 0.5 * y.lambda * k);

  std::vector<double> a(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<size_t>(i) * n + j] = c1 * y.Y(i, j);

  const std::uint64_t total = 1ULL << bits;
  const std::uint64_t row_mask = (1ULL << k) - 1;

  // streaming max-shifted log-sum-exp over all sign matrices
  double running_max = -std::numeric_limits<double>::infinity();
  double running_sum = 0.0;
  std::vector<std::uint32_t> rows(static_cast<size_t>(n));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    for (int r = 0; r < n; ++r)
      rows[static_cast<size_t>(r)] =
          static_cast<std::uint32_t>((idx >> (r * k)) & row_mask);
    double minus_h = diag_const;
    for (int i = 0; i < n; ++i) {
      const std::uint32_t ri = rows[static_cast<size_t>(i)];
      const double* arow = &a[static_cast<size_t>(i) * n];
      for (int j = i + 1; j < n; ++j) {
        // s_ij = sum_m x_i(m) x_j(m) = k - 2 popcount(rows_i XOR rows_j)
        const int s = k - 2 * __builtin_popcount(ri ^ rows[static_cast<size_t>(j)]);
        minus_h += arow[j] * s - c2 * s * s;
      }
    }
    if (minus_h <= running_max) {
      running_sum += std::exp(minus_h - running_max);
    } else {
      running_sum = running_sum * std::exp(running_max - minus_h) + 1.0;
      running_max = minus_h;
    }
  }
  return running_max + std::log(running_sum) - bits * std::log(2.0);
}

LrResult log_lr(const GaussianModelY& y, int k1, int k2) {
  LrResult r;
  r.logL1 = log_likelihood(y, k1);
  r.logL2 = log_likelihood(y, k2);
  r.log_lr = r.logL2 - r.logL1;
  return r;
}

double lr_test_error_mc(int n, int k1, int k2, double lambda, double w2,
                        long trials, std::uint64_t seed) {
  if (k1 < 0 || k2 <= k1) throw config_error("need 0 <= k1 < k2");
  if (trials < 1) throw config_error("trials must be >= 1");
  if (static_cast<long long>(n) * k2 > kMaxEnumerationBits)
    throw capacity_error("n * k2 exceeds the enumeration bound");

  // Accept H1 iff L <= 1; error = P1(accept H2) + P2(accept H1).
  std::vector<unsigned char> wrong(static_cast<size_t>(2 * trials), 0);
  parallel_for_index(2 * trials, 0, [&](long t) {
    StreamRng rng(seed, static_cast<std::uint64_t>(t));
    const bool under_h2 = (t & 1) != 0;
    const GaussianModelY y =
        sample_gaussian_model(n, under_h2 ? k2 : k1, lambda, w2, rng);
    const double lr = log_lr(y, k1, k2).log_lr;
    wrong[static_cast<size_t>(t)] = under_h2 ? (lr <= 0.0) : (lr > 0.0);
  });

  long err1 = 0, err2 = 0;
  for (long t = 0; t < 2 * trials; ++t)
    ((t & 1) ? err2 : err1) += wrong[static_cast<size_t>(t)];
  return static_cast<double>(err1) / trials + static_cast<double>(err2) / trials;
}

}  // namespace wigdet

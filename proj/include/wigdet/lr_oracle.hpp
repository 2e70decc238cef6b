#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "wigdet/model.hpp"

namespace wigdet {

// Spiked Gaussian Wigner matrix in the sqrt(N)-scaled convention:
//   Y = sqrt(lambda/N) X* X*^T + W,
// W symmetric Gaussian with off-diagonal variance 1 and diagonal variance w2,
// X* entries i.i.d. Rademacher (+-1).
struct GaussianModelY {
  int n = 0;
  Eigen::MatrixXd Y;
  double lambda = 0.0;
  double w2 = 2.0;
};

// Bridge from the unit-spike convention: Y = sqrt(n) * M.
GaussianModelY to_gaussian_model(const DataMatrix& m);

GaussianModelY sample_gaussian_model(int n, int k, double lambda, double w2,
                                     StreamRng& rng);

// Largest n*k for which 2^(n*k) enumeration is allowed.
inline constexpr int kMaxEnumerationBits = 24;

struct LrResult {
  double logL1 = 0.0;
  double logL2 = 0.0;
  double log_lr = 0.0;  // logL2 - logL1
};

// Hamiltonian H^k(X) for an n x k sign matrix X (entries +-1):
//   -H = sum_{i<j} [ sqrt(l/N) Y_ij s_ij - (l/2N) s_ij^2 ]
//        + (k/w2) [ sqrt(l/N) Tr Y - l k / 2 ],
// with s_ij the row dot products; the diagonal part is constant since
// x_i(n)^2 = 1.
double hamiltonian(const Eigen::MatrixXi& x_signs, const GaussianModelY& y);

// log L(Y;k) = log of the uniform average of exp(-H) over all 2^(n*k) sign
// matrices, computed with a max-shifted log-sum-exp.
// Throws capacity_error when n*k > kMaxEnumerationBits.
double log_likelihood(const GaussianModelY& y, int k);

LrResult log_lr(const GaussianModelY& y, int k1, int k2);

// Monte Carlo estimate of the LR-test error
//   P_1(accept H2) + P_2(accept H1), with H1 accepted iff L <= 1.
double lr_test_error_mc(int n, int k1, int k2, double lambda, double w2,
                        long trials, std::uint64_t seed);

}  // namespace wigdet

#pragma once

#include <stdexcept>
#include <string>

namespace wigdet {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: unknown keys, parameters outside their stated domain.
struct config_error : error {
  using error::error;
};

// Parameter combinations that are syntactically fine but mathematically
// out of range (e.g. lambda * F_H >= 1).
struct domain_error : error {
  using error::error;
};

// Eigensolver non-convergence, quadrature failure, series truncation.
struct numeric_error : error {
  using error::error;
};

// Brute-force enumeration request beyond the 2^(n*k) bound.
struct capacity_error : error {
  using error::error;
};

// An eigenvalue reached the logarithmic singularity of the test statistic.
// Recoverable: callers discard the trial and count it as aborted.
struct spectral_overflow : error {
  using error::error;
};

}  // namespace wigdet

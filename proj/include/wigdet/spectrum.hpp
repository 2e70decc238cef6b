#pragma once

#include <Eigen/Core>
#include <functional>

#include "wigdet/model.hpp"

namespace wigdet {

struct Spectrum {
  Eigen::VectorXd values;  // sorted descending

  int size() const { return static_cast<int>(values.size()); }
  double largest() const { return values(0); }
  double sum() const { return values.sum(); }
  double sum_squares() const { return values.squaredNorm(); }
};

// Full real spectrum of a symmetric matrix, descending.
// Throws numeric_error (with a matrix hash for reproduction) on
// eigensolver non-convergence.
Spectrum eigenvalues(const Eigen::MatrixXd& m);
Spectrum eigenvalues(const DataMatrix& m);

// L_N(f) = sum_i f(mu_i). Throws domain_error naming the offending
// eigenvalue if f evaluates to a non-finite value.
double lss(const std::function<double(double)>& f, const Spectrum& spec);

// Diagnostic decomposition with eigenvectors and the reconstruction
// residual ||M - Q L Q^T||_F / ||M||_F.
struct EigenDecomposition {
  Spectrum spectrum;
  Eigen::MatrixXd vectors;  // columns ordered like spectrum.values
  double relative_residual = 0.0;
};

EigenDecomposition eigen_decomposition(const DataMatrix& m);

}  // namespace wigdet

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wigdet/model.hpp"

namespace wigdet {

// Density of a unit-variance normalized matrix entry together with its score
// h = -g'/g. Built-ins use the closed-form h; tabulated densities fall back
// to a centered finite difference of log g with step 1e-5.
struct EntryDensity {
  std::string name;
  std::function<double(double)> g;
  std::function<double(double)> h;
  bool closed_form_h = false;
  // Knot positions for tabulated densities. Functional integrals over such a
  // density go cell by cell with a fixed Gauss-Legendre rule; the
  // finite-difference score is too noisy for global adaptive quadrature.
  std::vector<double> knots;

  static EntryDensity standard_gaussian();
  // Zero-mean Gaussian with the given variance (used e.g. to probe
  // F^H_d = 1/sigma^2 by quadrature).
  static EntryDensity gaussian(double variance);
  // g(x) = 1/(2 cosh(pi x / 2)), h(x) = (pi/2) tanh(pi x / 2).
  static EntryDensity sech();
  // Monotone-cubic interpolation of a tabulated (x, g(x)) grid; zero
  // outside the grid.
  static EntryDensity tabulated(std::vector<std::pair<double, double>> grid,
                                std::string name = "tabulated");
};

// Fisher-type functionals of the noise densities:
//   F^H  = int g'^2 / g,        F^H_d likewise for g_d,
//   G^H  = (1/2F^H) int g'^2 g'' / g^2,
//   w4t  = (1/F^H^2) int g'^4 / g^3.
// F^H >= 1 with equality iff g is the standard Gaussian.
struct DensityFunctionals {
  double FH = 1.0;
  double FHd = 1.0;
  double GH = 1.0;
  double w4t = 3.0;
};

// Evaluates the four functionals by adaptive quadrature (absolute tolerance
// 1e-10, integration window grown until the tails drop below 1e-12).
DensityFunctionals fisher_functionals(const EntryDensity& g,
                                      const EntryDensity& g_d);

// Entrywise transformation
//   Mt_ij = h(sqrt(n) M_ij) / sqrt(F^H n)            (i != j)
//   Mt_ii = sqrt(w2/(F^H_d n)) h_d(sqrt(n/w2) M_ii),
// applied to the upper triangle and mirrored, so Mt is exactly symmetric.
DataMatrix entrywise_transform(const DataMatrix& m, const EntryDensity& g,
                               const EntryDensity& g_d, double w2,
                               const DensityFunctionals& funcs);

// Convenience overload computing the functionals on the fly.
DataMatrix entrywise_transform(const DataMatrix& m, const EntryDensity& g,
                               const EntryDensity& g_d, double w2);

}  // namespace wigdet

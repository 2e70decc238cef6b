#include "wigdet/transform.hpp"

#include <algorithm>
#include <cmath>

#include "wigdet/errors.hpp"
#include "wigdet/interp.hpp"
#include "wigdet/quadrature.hpp"

namespace wigdet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kFdStep = 1e-5;  // finite-difference step for -(log g)'

}  // namespace

EntryDensity EntryDensity::standard_gaussian() {
  EntryDensity d;
  d.name = "gaussian";
  d.g = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); };
  d.h = [](double x) { return x; };
  d.closed_form_h = true;
  return d;
}

EntryDensity EntryDensity::gaussian(double variance) {
  if (!(variance > 0.0)) throw config_error("gaussian density needs variance > 0");
  EntryDensity d;
  d.name = "gaussian_var";
  d.g = [variance](double x) {
    return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * kPi * variance);
  };
  d.h = [variance](double x) { return x / variance; };
  d.closed_form_h = true;
  return d;
}

EntryDensity EntryDensity::sech() {
  EntryDensity d;
  d.name = "sech";
  d.g = [](double x) { return 1.0 / (2.0 * std::cosh(kPi * x / 2.0)); };
  d.h = [](double x) { return 0.5 * kPi * std::tanh(kPi * x / 2.0); };
  d.closed_form_h = true;
  return d;
}

EntryDensity EntryDensity::tabulated(std::vector<std::pair<double, double>> grid,
                                     std::string name) {
  std::vector<double> xs, gs;
  xs.reserve(grid.size());
  gs.reserve(grid.size());
  for (auto& [x, g] : grid) {
    xs.push_back(x);
    gs.push_back(g);
  }
  EntryDensity d;
  d.knots = xs;
  MonotoneCubic interp(std::move(xs), std::move(gs));
  const double lo = interp.x_min(), hi = interp.x_max();

  d.name = std::move(name);
  d.g = [interp, lo, hi](double x) {
    return (x < lo || x > hi) ? 0.0 : std::max(interp(x), 0.0);
  };
  // h = -(log g)' by centered finite differences; arguments beyond the grid
  // clamp to the edge score so the stencil never leaves the table.
  auto g = d.g;
  d.h = [g, lo, hi](double x) {
    const double xc = std::clamp(x, lo + 2.0 * kFdStep, hi - 2.0 * kFdStep);
    const double ga = g(xc - kFdStep), gb = g(xc + kFdStep);
    if (ga <= 0.0 || gb <= 0.0)
      throw numeric_error("tabulated density is not positive near x");
    return -(std::log(gb) - std::log(ga)) / (2.0 * kFdStep);
  };
  d.closed_form_h = false;
  return d;
}

namespace {

// h' for the G^H integrand: g''/g = h^2 - h'.
std::function<double(double)> score_derivative(const EntryDensity& d) {
  if (d.name == "gaussian") return [](double) { return 1.0; };
  if (d.name == "sech") {
    return [](double x) {
      const double c = std::cosh(kPi * x / 2.0);
      return kPi * kPi / (4.0 * c * c);
    };
  }
  auto h = d.h;
  return [h](double x) { return (h(x + kFdStep) - h(x - kFdStep)) / (2.0 * kFdStep); };
}

// 7-point Gauss-Legendre on [-1, 1]
constexpr double kGlNodes[7] = {0.0,
                                -0.4058451513773972, 0.4058451513773972,
                                -0.7415311855993945, 0.7415311855993945,
                                -0.9491079123427585, 0.9491079123427585};
constexpr double kGlWeights[7] = {0.4179591836734694,
                                  0.3818300505051189, 0.3818300505051189,
                                  0.2797053914892766, 0.2797053914892766,
                                  0.1294849661688697, 0.1294849661688697};

double functional_integral(const EntryDensity& density,
                           const std::function<double(double)>& integrand) {
  if (density.knots.empty()) return integrate_real_line(integrand, 1e-10);
  // piecewise-cubic density: a fixed rule per cell is exact enough and does
  // not chase finite-difference noise
  double acc = 0.0;
  for (size_t c = 0; c + 1 < density.knots.size(); ++c) {
    const double a = density.knots[c], b = density.knots[c + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < 7; ++q)
      acc += half * kGlWeights[q] * integrand(mid + half * kGlNodes[q]);
  }
  return acc;
}

}  // namespace

DensityFunctionals fisher_functionals(const EntryDensity& g,
                                      const EntryDensity& g_d) {
  // All integrands rewritten through the score h = -g'/g:
  //   g'^2/g = h^2 g,  g'^2 g''/g^2 = h^2 (h^2 - h') g,  g'^4/g^3 = h^4 g.
  auto hp = score_derivative(g);
  const double FH = functional_integral(
      g, [&](double x) { const double h = g.h(x); return h * h * g.g(x); });
  if (!(FH > 0.0)) throw numeric_error("F^H quadrature returned a non-positive value");
  const double FHd = functional_integral(
      g_d, [&](double x) { const double h = g_d.h(x); return h * h * g_d.g(x); });
  const double GH =
      functional_integral(g,
                          [&](double x) {
                            const double h = g.h(x);
                            return h * h * (h * h - hp(x)) * g.g(x);
                          }) /
      (2.0 * FH);
  const double w4t = functional_integral(g,
                                         [&](double x) {
                                           const double h = g.h(x);
                                           return h * h * h * h * g.g(x);
                                         }) /
                     (FH * FH);
  return {FH, FHd, GH, w4t};
}

DataMatrix entrywise_transform(const DataMatrix& m, const EntryDensity& g,
                               const EntryDensity& g_d, double w2,
                               const DensityFunctionals& funcs) {
  if (!(w2 > 0.0)) throw domain_error("w2 must be > 0");
  if (!std::isfinite(funcs.FH) || !std::isfinite(funcs.FHd))
    throw numeric_error("density functionals are not finite");

  const int n = m.n;
  const double nd = static_cast<double>(n);
  const double off_in = std::sqrt(nd);
  const double off_out = 1.0 / std::sqrt(funcs.FH * nd);
  const double diag_in = std::sqrt(nd / w2);
  const double diag_out = std::sqrt(w2 / (funcs.FHd * nd));

  DataMatrix t = m;
  for (int i = 0; i < n; ++i) {
    t.entries(i, i) = diag_out * g_d.h(diag_in * m.entries(i, i));
    for (int j = i + 1; j < n; ++j) {
      const double v = off_out * g.h(off_in * m.entries(i, j));
      if (!std::isfinite(v)) throw numeric_error("entrywise transform overflow");
      t.entries(i, j) = v;
      t.entries(j, i) = v;
    }
  }
  return t;
}

DataMatrix entrywise_transform(const DataMatrix& m, const EntryDensity& g,
                               const EntryDensity& g_d, double w2) {
  return entrywise_transform(m, g, g_d, w2, fisher_functionals(g, g_d));
}

}  // namespace wigdet

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wigdet/errors.hpp"
#include "wigdet/model.hpp"
#include "wigdet/transform.hpp"

using namespace wigdet;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<std::pair<double, double>> sech_grid() {
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -20.0 + 0.01 * i;
    grid.emplace_back(x, 1.0 / (2.0 * std::cosh(kPi * x / 2.0)));
  }
  return grid;
}

}  // namespace

TEST_CASE("gaussian functionals: F=1, w4t=3, G=1") {
  const auto g = EntryDensity::standard_gaussian();
  const DensityFunctionals f = fisher_functionals(g, g);
  CHECK(f.FH == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(f.FHd == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(f.w4t == doctest::Approx(3.0).epsilon(1e-8));
  // G^H = (1/2) E[w^2 (w^2 - 1)] = 1 for the standard Gaussian
  CHECK(f.GH == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sech functionals: pi^2/8, pi^2/8, pi^2/16, 3/2") {
  const auto g = EntryDensity::sech();
  const DensityFunctionals f = fisher_functionals(g, g);
  CHECK(f.FH == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-8));
  CHECK(f.FHd == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-8));
  CHECK(f.GH == doctest::Approx(kPi * kPi / 16.0).epsilon(1e-8));
  CHECK(f.w4t == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("variance-2 gaussian diagonal density: F^H_d = 1/2") {
  const DensityFunctionals f =
      fisher_functionals(EntryDensity::standard_gaussian(), EntryDensity::gaussian(2.0));
  CHECK(f.FHd == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("F^H >= 1 with equality only at the Gaussian") {
  const auto sech = fisher_functionals(EntryDensity::sech(), EntryDensity::sech());
  CHECK(sech.FH > 1.0);
  const auto tab = EntryDensity::tabulated(sech_grid(), "tab_sech");
  const auto tf = fisher_functionals(tab, tab);
  CHECK(tf.FH > 1.0);
}

TEST_CASE("tabulated sech density reproduces the closed-form functionals") {
  const auto tab = EntryDensity::tabulated(sech_grid(), "tab_sech");
  const DensityFunctionals f = fisher_functionals(tab, tab);
  // finite-difference score: a few digits looser than the closed form
  CHECK(f.FH == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-5));
  CHECK(f.FHd == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-5));
  CHECK(f.GH == doctest::Approx(kPi * kPi / 16.0).epsilon(1e-4));
  CHECK(f.w4t == doctest::Approx(1.5).epsilon(1e-4));

  // the finite-difference h tracks the closed-form score pointwise to the
  // interpolation accuracy of the 0.01-step grid
  const auto closed = EntryDensity::sech();
  for (double x : {-2.0, -0.7, 0.0, 0.4, 1.3, 3.0})
    CHECK(tab.h(x) == doctest::Approx(closed.h(x)).epsilon(5e-4));
}

TEST_CASE("gaussian transform is the identity") {
  StreamRng rng(31, 0);
  const auto g = EntryDensity::standard_gaussian();
  const DensityFunctionals funcs = fisher_functionals(g, g);

  for (const NoiseSpec& noise : {NoiseSpec::gaussian_unit_diag(), NoiseSpec::goe()}) {
    const DataMatrix m = sample_wigner(noise, 64, rng);
    const DataMatrix t = entrywise_transform(m, g, g, noise.w2, funcs);
    CHECK((t.entries - m.entries).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sech transform matches the closed form entrywise") {
  StreamRng rng(32, 0);
  const DataMatrix m = sample_wigner(NoiseSpec::sech(), 48, rng);
  const auto g = EntryDensity::sech();
  const DensityFunctionals funcs = fisher_functionals(g, g);
  const DataMatrix t = entrywise_transform(m, g, g, 1.0, funcs);

  const double n = 48.0;
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < 48; ++j) {
      const double expect =
          std::sqrt(2.0 / n) * std::tanh(0.5 * kPi * std::sqrt(n) * m.entries(i, j));
      CHECK(t.entries(i, j) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("transform maps zero to zero and preserves symmetry") {
  DataMatrix zero;
  zero.n = 8;
  zero.entries = Eigen::MatrixXd::Zero(8, 8);
  const auto g = EntryDensity::sech();
  const DataMatrix t = entrywise_transform(zero, g, g, 1.0);
  CHECK(t.entries.cwiseAbs().maxCoeff() == 0.0);

  StreamRng rng(33, 0);
  const DataMatrix m = sample_wigner(NoiseSpec::sech(), 96, rng);
  const DataMatrix tm = entrywise_transform(m, g, g, 1.0);
  CHECK((tm.entries - tm.entries.transpose()).norm() == 0.0);
}

TEST_CASE("transform restores unit variance for pure sech noise") {
  StreamRng rng(34, 0);
  const DataMatrix m = sample_wigner(NoiseSpec::sech(), 1024, rng);
  const auto g = EntryDensity::sech();
  const DataMatrix t = entrywise_transform(m, g, g, 1.0);
  double acc = 0.0;
  long count = 0;
  for (int i = 0; i < t.n; ++i)
    for (int j = i + 1; j < t.n; ++j) {
      acc += t.n * t.entries(i, j) * t.entries(i, j);
      ++count;
    }
  const double variance = acc / count;
  CHECK(variance > 0.9);
  CHECK(variance < 1.1);
}

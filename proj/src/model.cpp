#include "wigdet/model.hpp"

#include <cmath>
#include <cstdio>

#include "wigdet/errors.hpp"
#include "wigdet/interp.hpp"
#include "wigdet/quadrature.hpp"

namespace wigdet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double gaussian_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double sech_pdf(double x) { return 1.0 / (2.0 * std::cosh(kPi * x / 2.0)); }

double density_moment(const std::function<double(double)>& g, int p) {
  return integrate_real_line(
      [&](double x) { return std::pow(x, p) * g(x); }, 1e-10);
}

}  // namespace

NoiseSpec NoiseSpec::goe() {
  NoiseSpec s;
  s.kind = NoiseKind::gaussian_goe;
  s.w2 = 2.0;
  s.w3 = 0.0;
  s.w4 = 3.0;
  s.off_density = gaussian_pdf;
  s.diag_density = gaussian_pdf;
  s.tag = "goe";
  return s;
}

NoiseSpec NoiseSpec::gaussian_unit_diag() {
  NoiseSpec s = goe();
  s.kind = NoiseKind::gaussian_unit_diag;
  s.w2 = 1.0;
  s.tag = "gaussian_unit_diag";
  return s;
}

NoiseSpec NoiseSpec::sech() {
  NoiseSpec s;
  s.kind = NoiseKind::sech;
  s.w2 = 1.0;
  s.w3 = 0.0;
  s.w4 = 5.0;
  s.off_density = sech_pdf;
  s.diag_density = sech_pdf;
  s.tag = "sech";
  return s;
}

NoiseSpec NoiseSpec::custom_tabulated(
    const std::vector<std::pair<double, double>>& off_grid,
    const std::vector<std::pair<double, double>>& diag_grid, std::string tag) {
  auto build = [](const std::vector<std::pair<double, double>>& grid) {
    std::vector<double> xs, gs;
    xs.reserve(grid.size());
    gs.reserve(grid.size());
    for (auto& [x, g] : grid) {
      if (g < 0.0) throw config_error("tabulated density has a negative value");
      xs.push_back(x);
      gs.push_back(g);
    }
    return MonotoneCubic(std::move(xs), std::move(gs));
  };

  auto make_density = [](MonotoneCubic interp) {
    const double lo = interp.x_min(), hi = interp.x_max();
    return std::function<double(double)>(
        [interp = std::move(interp), lo, hi](double x) {
          return (x < lo || x > hi) ? 0.0 : std::max(interp(x), 0.0);
        });
  };

  // Inverse-CDF sampler: cumulative trapezoid on a fine grid, then a
  // monotone-cubic inverse u -> x.
  auto make_sampler = [](const std::function<double(double)>& g, double lo,
                         double hi) {
    const int kCells = 8192;
    std::vector<double> xs(kCells + 1), cdf(kCells + 1);
    const double h = (hi - lo) / kCells;
    xs[0] = lo;
    cdf[0] = 0.0;
    for (int i = 1; i <= kCells; ++i) {
      xs[i] = lo + h * i;
      cdf[i] = cdf[i - 1] + 0.5 * h * (g(xs[i - 1]) + g(xs[i]));
    }
    const double total = cdf.back();
    if (total <= 0.0) throw config_error("tabulated density integrates to zero");
    // strictly increasing knots only (flat density regions collapse)
    std::vector<double> u_knots, x_knots;
    u_knots.push_back(0.0);
    x_knots.push_back(xs[0]);
    for (int i = 1; i <= kCells; ++i) {
      const double u = cdf[i] / total;
      if (u > u_knots.back() + 1e-15) {
        u_knots.push_back(u);
        x_knots.push_back(xs[i]);
      }
    }
    MonotoneCubic inv(std::move(u_knots), std::move(x_knots));
    return std::function<double(StreamRng&)>(
        [inv = std::move(inv)](StreamRng& rng) { return inv(rng.next_open_unit()); });
  };

  NoiseSpec s;
  s.kind = NoiseKind::custom;
  s.tag = std::move(tag);

  MonotoneCubic off_interp = build(off_grid);
  const double off_lo = off_interp.x_min(), off_hi = off_interp.x_max();
  s.off_density = make_density(std::move(off_interp));

  const double mass = integrate_real_line(s.off_density, 1e-10, 1e-12, std::max(10.0, off_hi));
  const double m2 = density_moment(s.off_density, 2);
  if (std::fabs(mass - 1.0) > 1e-6)
    throw config_error("custom off-diagonal density must integrate to 1 (got " +
                       std::to_string(mass) + ")");
  if (std::fabs(m2 - 1.0) > 1e-3)
    throw config_error("custom off-diagonal density must have unit variance (got " +
                       std::to_string(m2) + ")");
  s.w3 = density_moment(s.off_density, 3);
  s.w4 = density_moment(s.off_density, 4);
  s.off_sampler = make_sampler(s.off_density, off_lo, off_hi);

  if (diag_grid.empty()) {
    s.diag_density = s.off_density;
    s.diag_sampler = s.off_sampler;
    s.w2 = 1.0;
  } else {
    MonotoneCubic diag_interp = build(diag_grid);
    const double dlo = diag_interp.x_min(), dhi = diag_interp.x_max();
    s.diag_density = make_density(std::move(diag_interp));
    const double dmass = integrate_real_line(s.diag_density, 1e-10, 1e-12, std::max(10.0, dhi));
    const double dm2 = density_moment(s.diag_density, 2);
    if (std::fabs(dmass - 1.0) > 1e-6)
      throw config_error("custom diagonal density must integrate to 1");
    if (std::fabs(dm2 - 1.0) > 1e-3)
      throw config_error("custom diagonal density must have unit variance");
    s.diag_sampler = make_sampler(s.diag_density, dlo, dhi);
    s.w2 = 1.0;  // caller may override after construction
  }
  return s;
}

void validate(const NoiseSpec& noise) {
  if (noise.w2 < 0.0) throw config_error("noise.w2 must be >= 0");
  if (noise.w4 < 1.0)
    throw config_error("noise.w4 must be >= 1 (fourth moment of a unit-variance law)");
  switch (noise.kind) {
    case NoiseKind::gaussian_goe:
      if (noise.w2 != 2.0 || noise.w4 != 3.0)
        throw config_error("gaussian_goe noise has w2 = 2, w4 = 3");
      break;
    case NoiseKind::gaussian_unit_diag:
      if (noise.w2 != 1.0 || noise.w4 != 3.0)
        throw config_error("gaussian_unit_diag noise has w2 = 1, w4 = 3");
      break;
    case NoiseKind::sech:
      if (noise.w2 != 1.0 || noise.w4 != 5.0)
        throw config_error("sech noise has w2 = 1, w4 = 5");
      break;
    case NoiseKind::custom:
      break;
  }
  for (const auto* density : {&noise.off_density, &noise.diag_density}) {
    if (!*density) continue;
    const double mass = integrate_real_line(*density, 1e-10);
    if (std::fabs(mass - 1.0) > 1e-8)
      throw config_error("noise density integrates to " + std::to_string(mass) +
                         ", expected 1");
  }
}

double SpikeMatrix::max_gram_offdiag() const {
  double worst = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      worst = std::max(worst, std::fabs(columns.col(a).dot(columns.col(b))));
  return worst;
}

DataMatrix sample_wigner(const NoiseSpec& noise, int n, StreamRng& rng) {
  if (n < 1) throw config_error("matrix dimension must be >= 1");

  std::function<double(StreamRng&)> off, diag;
  switch (noise.kind) {
    case NoiseKind::gaussian_goe:
    case NoiseKind::gaussian_unit_diag:
      off = [](StreamRng& r) { return r.next_normal(); };
      diag = off;
      break;
    case NoiseKind::sech:
      off = [](StreamRng& r) { return r.next_sech(); };
      diag = off;
      break;
    case NoiseKind::custom:
      if (!noise.off_sampler || !noise.diag_sampler)
        throw config_error("custom noise has no sampler; supply a tabulated density");
      off = noise.off_sampler;
      diag = noise.diag_sampler;
      break;
  }

  const double off_scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag_scale = std::sqrt(noise.w2 / static_cast<double>(n));

  DataMatrix m;
  m.n = n;
  m.entries.resize(n, n);
  m.meta.noise_tag = noise.tag;
  for (int i = 0; i < n; ++i) {
    m.entries(i, i) = diag_scale * diag(rng);
    for (int j = i + 1; j < n; ++j) {
      const double v = off_scale * off(rng);
      m.entries(i, j) = v;
      m.entries(j, i) = v;
    }
  }
  return m;
}

SpikeMatrix sample_spike(const SpikePrior& prior, int n, int k, StreamRng& rng) {
  if (n < 1) throw config_error("spike dimension must be >= 1");
  if (k < 0) throw config_error("spike rank must be >= 0");

  SpikeMatrix spike;
  spike.n = n;
  spike.k = k;
  spike.prior_kind = prior.kind;
  spike.columns.resize(n, k);
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < n; ++i) {
      double v;
      switch (prior.kind) {
        case PriorKind::rademacher:
          v = static_cast<double>(rng.next_sign());
          break;
        case PriorKind::gaussian:
          v = rng.next_normal();
          break;
        case PriorKind::custom:
          if (!prior.sampler) throw config_error("custom prior has no sampler");
          v = prior.sampler(rng);
          break;
        default:
          throw config_error("unknown prior kind");
      }
      spike.columns(i, c) = v;
    }
    spike.columns.col(c) /= spike.columns.col(c).norm();
  }
  return spike;
}

DataMatrix assemble(const SpikeMatrix& spike, double lambda,
                    const DataMatrix& noise_draw) {
  if (spike.k > 0 && spike.n != noise_draw.n)
    throw config_error("spike and noise dimensions differ");
  if (lambda < 0.0) throw config_error("lambda must be >= 0");

  DataMatrix m = noise_draw;
  m.meta.lambda = lambda;
  m.meta.true_rank = spike.k;
  m.meta.spike_gram_offdiag = spike.max_gram_offdiag();
  if (spike.k == 0 || lambda == 0.0) return m;

  // Delocalization diagnostic for custom spikes: the entrywise-transform
  // theory assumes ||x||_inf <= n^{-c} with c > 3/8 (the built-in priors
  // satisfy it on their own).
  if (spike.prior_kind == PriorKind::custom) {
    const double linf = spike.columns.cwiseAbs().maxCoeff();
    const double bound = std::pow(static_cast<double>(spike.n), -3.0 / 8.0);
    if (linf > bound)
      std::fprintf(stderr,
                   "wigdet: warning: spike max-entry %.3g exceeds n^(-3/8) = "
                   "%.3g; entrywise-transform asymptotics may not apply\n",
                   linf, bound);
  }

  const double root = std::sqrt(lambda);
  const int n = m.n;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double s = root * spike.columns.row(i).dot(spike.columns.row(j));
      m.entries(i, j) += s;
      if (j != i) m.entries(j, i) = m.entries(i, j);
    }
  }
  return m;
}

}  // namespace wigdet

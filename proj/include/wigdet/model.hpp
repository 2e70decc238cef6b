#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wigdet/rng.hpp"

namespace wigdet {

enum class NoiseKind { gaussian_goe, gaussian_unit_diag, sech, custom };
enum class PriorKind { rademacher, gaussian, custom };

// Noise-distribution descriptor. Moments are the normalized ones:
//   w2 = N E[H_ii^2],  w3 = N^{3/2} E[H_ij^3],  w4 = N^2 E[H_ij^4].
// Densities, when present, describe the unit-variance normalized entries
// (sqrt(N) H_ij off-diagonal, sqrt(N/w2) H_ii on the diagonal).
struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian_goe;
  double w2 = 2.0;
  double w3 = 0.0;
  double w4 = 3.0;
  std::function<double(double)> off_density;   // optional
  std::function<double(double)> diag_density;  // optional
  // Unit-variance samplers for kind == custom; built-in kinds ignore them.
  std::function<double(StreamRng&)> off_sampler;
  std::function<double(StreamRng&)> diag_sampler;
  std::string tag = "goe";

  static NoiseSpec goe();
  static NoiseSpec gaussian_unit_diag();
  static NoiseSpec sech();
  // Custom noise from tabulated (x, g(x)) grids; moments and an inverse-CDF
  // sampler are derived numerically. A missing diagonal grid reuses the
  // off-diagonal one (then w2 = 1).
  static NoiseSpec custom_tabulated(
      const std::vector<std::pair<double, double>>& off_grid,
      const std::vector<std::pair<double, double>>& diag_grid = {},
      std::string tag = "custom");
};

// Checks the moment invariants (w4 >= 1, built-in moment values) and, when a
// density is attached, that it integrates to 1 within 1e-8.
void validate(const NoiseSpec& noise);

struct SpikePrior {
  PriorKind kind = PriorKind::rademacher;
  bool bounded = true;
  double third_moment = 0.0;  // kappa of the normalized prior
  std::function<double(StreamRng&)> sampler;  // custom only

  static SpikePrior rademacher() { return {}; }
  static SpikePrior gaussian() { return {PriorKind::gaussian, false, 0.0, {}}; }
};

struct SpikeMatrix {
  int n = 0;
  int k = 0;
  Eigen::MatrixXd columns;  // n x k, each column L2-normalized
  // Hand-built spikes default to custom, which opts them into the
  // delocalization diagnostic in assemble().
  PriorKind prior_kind = PriorKind::custom;

  // Largest |<x(i), x(j)>| over i != j; diagnostic for near-orthogonality.
  double max_gram_offdiag() const;
};

struct MatrixMeta {
  double lambda = 0.0;
  int true_rank = 0;
  std::string noise_tag;
  double spike_gram_offdiag = 0.0;
};

struct DataMatrix {
  int n = 0;
  Eigen::MatrixXd entries;  // symmetric
  MatrixMeta meta;
};

// Wigner matrix per the normalization above: off-diagonal entries have
// variance 1/n, diagonal entries variance w2/n.
DataMatrix sample_wigner(const NoiseSpec& noise, int n, StreamRng& rng);

// k i.i.d. spike columns, each normalized to unit L2 norm. For the
// Rademacher prior the entries are exactly +-1/sqrt(n).
SpikeMatrix sample_spike(const SpikePrior& prior, int n, int k, StreamRng& rng);

// M = sqrt(lambda) X X^T + H, exactly symmetric.
DataMatrix assemble(const SpikeMatrix& spike, double lambda,
                    const DataMatrix& noise_draw);

}  // namespace wigdet

#pragma once

#include <optional>

#include "wigdet/lss_stats.hpp"
#include "wigdet/transform.hpp"

namespace wigdet {

// H1: k = k1 versus H2: k = k2 with 0 <= k1 < k2.
struct HypothesisPair {
  int k1 = 0;
  int k2 = 1;
};

void validate(const HypothesisPair& hyp);

enum class Decision { H1, H2 };

struct TestOutcome {
  double statistic = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::H1;
  bool aborted = false;  // spectral overflow; statistic undefined
};

struct RankEstimate {
  double kappa_raw = 0.0;  // kappa'
  int kappa = 0;
};

// The shared decision rule: accept H1 iff statistic <= threshold
// (a tie goes to H1).
TestOutcome decide_hypothesis(double statistic, double threshold);

// Algorithm 1: accept H1 iff L_lambda <= m_lambda (tie goes to H1).
TestOutcome hypothesis_test(const DataMatrix& m, double lambda, double w2,
                            double w4, const HypothesisPair& hyp);

// Algorithm 2: same decision rule on the transformed matrix and model.
// Requires lambda * F^H < 1; otherwise throws domain_error (PCA detects
// reliably above that point).
TestOutcome hypothesis_test_transformed(const DataMatrix& m, double lambda,
                                        double w2, const EntryDensity& g,
                                        const EntryDensity& g_d,
                                        const HypothesisPair& hyp,
                                        const DensityFunctionals& funcs);
TestOutcome hypothesis_test_transformed(const DataMatrix& m, double lambda,
                                        double w2, const EntryDensity& g,
                                        const EntryDensity& g_d,
                                        const HypothesisPair& hyp);

// Algorithm 3: kappa' = (L - m_0)/delta; kappa = 0 when L <= (m_0+m_1)/2,
// else ceil(kappa' - 0.5) (round half down), clamped to [0, k_max] when a
// bounded range is known.
RankEstimate rank_from_statistic(double statistic, double lambda, double w2,
                                 double w4,
                                 std::optional<int> k_max = std::nullopt);
RankEstimate estimate_rank(const DataMatrix& m, double lambda, double w2,
                           double w4,
                           std::optional<int> k_max = std::nullopt);

// Limiting Type-I + Type-II error of Algorithm 1:
//   erfc( (k2-k1)/4 * sqrt(delta) ).
double limiting_error(const HypothesisPair& hyp, double lambda, double w2,
                      double w4);

// Limiting error of Algorithm 2 (uses delta~ of the transformed model).
double limiting_error_transformed(const HypothesisPair& hyp, double lambda,
                                  const DensityFunctionals& funcs, double w2);

// Limiting misclassification of Algorithm 3; p0 = P(k=0), and p_max is
// provided when the rank range is bounded above:
//   (1 - (p0 [+ p_max])/2) * erfc( sqrt(delta)/4 ).
double limiting_error_rank(double lambda, double w2, double w4, double p0,
                           std::optional<double> p_max = std::nullopt);

// Gaussian log-LR limit: log L => N(-mu, 2mu) under H1, N(mu, 2mu) under H2,
//   mu = (k2-k1)^2/4 * ( -log(1-lambda) + (2/w2 - 1) lambda ),
// and the limiting LR-test error erfc(sqrt(mu)/2). Valid for lambda below a
// guard value (the theory only asserts existence of such a threshold).
struct LrLimit {
  double mu = 0.0;
  double limit_error = 1.0;
};

LrLimit lr_limit_parameters(const HypothesisPair& hyp, double lambda,
                            double w2, double lambda0_guard = 0.5);

}  // namespace wigdet

#include "wigdet/detect.hpp"

#include <cmath>
#include <limits>

#include "wigdet/errors.hpp"

namespace wigdet {

void validate(const HypothesisPair& hyp) {
  if (hyp.k1 < 0 || hyp.k2 <= hyp.k1)
    throw config_error("hypothesis pair needs 0 <= k1 < k2");
}

TestOutcome decide_hypothesis(double statistic, double threshold) {
  TestOutcome out;
  out.statistic = statistic;
  out.threshold = threshold;
  out.decision = statistic <= threshold ? Decision::H1 : Decision::H2;
  return out;
}

TestOutcome hypothesis_test(const DataMatrix& m, double lambda, double w2,
                            double w4, const HypothesisPair& hyp) {
  validate(hyp);
  const double threshold = critical_value(lambda, w2, w4, hyp.k1, hyp.k2);
  try {
    const double stat = test_statistic_L(eigenvalues(m), lambda, w2, w4);
    return decide_hypothesis(stat, threshold);
  } catch (const spectral_overflow&) {
    // An eigenvalue at or beyond the logarithmic singularity drives the
    // statistic to +infinity, which is overwhelming evidence for the larger
    // rank: decide H2 and flag the trial.
    TestOutcome out;
    out.statistic = std::numeric_limits<double>::infinity();
    out.threshold = threshold;
    out.decision = Decision::H2;
    out.aborted = true;
    return out;
  }
}

TestOutcome hypothesis_test_transformed(const DataMatrix& m, double lambda,
                                        double w2, const EntryDensity& g,
                                        const EntryDensity& g_d,
                                        const HypothesisPair& hyp,
                                        const DensityFunctionals& funcs) {
  validate(hyp);
  if (!(lambda * funcs.FH < 1.0))
    throw domain_error(
        "lambda * F^H >= 1: the transformed spike is above the reliable "
        "detection threshold; use PCA instead");

  const auto model1 = transformed_lss_model(lambda, funcs.FH, funcs.FHd,
                                            funcs.GH, w2, funcs.w4t, hyp.k1);
  const auto model2 = transformed_lss_model(lambda, funcs.FH, funcs.FHd,
                                            funcs.GH, w2, funcs.w4t, hyp.k2);
  const double threshold = 0.5 * (model1.mk + model2.mk);
  try {
    const DataMatrix t = entrywise_transform(m, g, g_d, w2, funcs);
    const auto [stat, model] = transformed_statistic_and_model(
        eigenvalues(t), lambda, funcs.FH, funcs.FHd, funcs.GH, w2, funcs.w4t,
        hyp.k1);
    (void)model;
    return decide_hypothesis(stat, threshold);
  } catch (const spectral_overflow&) {
    TestOutcome out;
    out.statistic = std::numeric_limits<double>::infinity();
    out.threshold = threshold;
    out.decision = Decision::H2;
    out.aborted = true;
    return out;
  }
}

TestOutcome hypothesis_test_transformed(const DataMatrix& m, double lambda,
                                        double w2, const EntryDensity& g,
                                        const EntryDensity& g_d,
                                        const HypothesisPair& hyp) {
  return hypothesis_test_transformed(m, lambda, w2, g, g_d, hyp,
                                     fisher_functionals(g, g_d));
}

RankEstimate rank_from_statistic(double statistic, double lambda, double w2,
                                 double w4, std::optional<int> k_max) {
  const double delta = rank_drift(lambda, w2, w4);
  if (!(delta > 0.0)) throw domain_error("degenerate parameters: delta <= 0");
  const LssModel model = lss_mean_variance(lambda, w2, w4, 0);

  RankEstimate est;
  est.kappa_raw = (statistic - model.m0) / delta;
  if (statistic <= model.m0 + 0.5 * delta) {
    est.kappa = 0;  // includes everything at or below (m_0 + m_1)/2
  } else {
    est.kappa = static_cast<int>(std::ceil(est.kappa_raw - 0.5));
  }
  if (k_max) est.kappa = std::min(est.kappa, *k_max);
  return est;
}

RankEstimate estimate_rank(const DataMatrix& m, double lambda, double w2,
                           double w4, std::optional<int> k_max) {
  const double stat = test_statistic_L(eigenvalues(m), lambda, w2, w4);
  return rank_from_statistic(stat, lambda, w2, w4, k_max);
}

double limiting_error(const HypothesisPair& hyp, double lambda, double w2,
                      double w4) {
  validate(hyp);
  const double delta = rank_drift(lambda, w2, w4);
  return std::erfc(0.25 * (hyp.k2 - hyp.k1) * std::sqrt(delta));
}

double limiting_error_transformed(const HypothesisPair& hyp, double lambda,
                                  const DensityFunctionals& funcs, double w2) {
  validate(hyp);
  if (!(lambda > 0.0 && lambda * funcs.FH < 1.0))
    throw domain_error("need 0 < lambda and lambda * F^H < 1");
  const double delta = rank_drift_transformed(lambda, funcs.FH, funcs.FHd,
                                              funcs.GH, w2, funcs.w4t);
  return std::erfc(0.25 * (hyp.k2 - hyp.k1) * std::sqrt(delta));
}

double limiting_error_rank(double lambda, double w2, double w4, double p0,
                           std::optional<double> p_max) {
  if (p0 < 0.0 || p0 > 1.0) throw domain_error("p0 must be in [0,1]");
  double boundary_mass = p0;
  if (p_max) {
    if (*p_max < 0.0 || *p_max > 1.0) throw domain_error("p_max must be in [0,1]");
    boundary_mass += *p_max;
  }
  if (boundary_mass > 1.0 + 1e-12)
    throw domain_error("p0 + p_max exceeds 1");
  const double delta = rank_drift(lambda, w2, w4);
  return (1.0 - 0.5 * boundary_mass) * std::erfc(0.25 * std::sqrt(delta));
}

LrLimit lr_limit_parameters(const HypothesisPair& hyp, double lambda,
                            double w2, double lambda0_guard) {
  validate(hyp);
  if (!(w2 > 0.0)) throw domain_error("w2 must be > 0");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw domain_error("lambda must be in (0,1)");
  if (lambda > lambda0_guard)
    throw domain_error(
        "lambda exceeds the small-SNR guard for the log-LR Gaussian limit");

  const double diff = hyp.k2 - hyp.k1;
  const double base = -std::log1p(-lambda) + (2.0 / w2 - 1.0) * lambda;
  LrLimit out;
  out.mu = 0.25 * diff * diff * base;
  // erfc((k2-k1)/4 sqrt(base)) == erfc(sqrt(mu)/2) by construction
  out.limit_error = std::erfc(0.5 * std::sqrt(out.mu));
  return out;
}

}  // namespace wigdet

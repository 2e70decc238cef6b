#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wigdet/detect.hpp"
#include "wigdet/model.hpp"

namespace wigdet {

enum class ExperimentKind {
  hypothesis,
  hypothesis_transformed,
  rank,
  clt_check,
  lr_oracle,
};

enum class Profile { none, paper, ci };

struct NoiseConfig {
  NoiseKind kind = NoiseKind::gaussian_goe;
  std::optional<double> w2, w3, w4;  // required for custom, fixed for built-ins
  std::vector<std::pair<double, double>> off_density_grid;
  std::vector<std::pair<double, double>> diag_density_grid;
};

struct PriorConfig {
  PriorKind kind = PriorKind::rademacher;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::hypothesis;
  int n = 256;
  long trials = 10000;
  std::vector<double> lambda_grid;
  NoiseConfig noise;
  PriorConfig prior;
  std::optional<HypothesisPair> hyp;              // hypothesis / lr_oracle
  std::optional<std::pair<int, int>> rank_range;  // rank, [0, k_max]
  // With clamping off the estimator ignores the known range; the true rank is
  // still drawn from rank_range (degenerate priors use [0, 0]).
  bool rank_range_clamp = true;
  std::vector<int> k_list;                        // clt_check
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int workers = 0;  // 0 = hardware concurrency
  Profile profile = Profile::none;
};

// Parses a JSON config document; unknown keys are rejected with field-level
// messages. Profile defaults (paper: n=256/trials=10000, ci: n=64/trials=2000)
// apply to fields the document leaves out.
ExperimentConfig parse_config(const std::string& json_text,
                              Profile profile = Profile::none);
ExperimentConfig load_config_file(const std::string& path,
                                  Profile profile = Profile::none);
void validate_config(const ExperimentConfig& cfg);

struct TrialRecord {
  long trial_id = 0;
  double lambda = 0.0;
  int true_k = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  int decision = 0;  // 1/2 for H1/H2, or kappa for rank experiments
  bool aborted = false;
};

struct SummaryRow {
  double lambda = 0.0;
  int k1 = 0;
  int k2_or_kmax = 0;
  double empirical_error = 0.0;    // Type-I + Type-II sum, in [0, 2]
  double theoretical_error = 0.0;  // matching erfc curve
  long trials = 0;
  long aborted = 0;
};

struct CltRow {
  double lambda = 0.0;
  int k = 0;
  double sample_mean = 0.0;
  double mean_limit = 0.0;  // m_k
  double sample_variance = 0.0;
  double variance_limit = 0.0;  // V_0
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  long trials = 0;
  long aborted = 0;
  bool mean_ok = false;
  bool variance_ok = false;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::hypothesis;
  std::vector<TrialRecord> trials;  // ordered by trial_id
  std::vector<SummaryRow> summary;
  std::vector<CltRow> clt;
  // hypothesis_transformed keeps the untransformed baseline alongside
  std::vector<TrialRecord> baseline_trials;
  std::vector<SummaryRow> baseline_summary;
};

// Runs the experiment in memory (no I/O). Trials are distributed over a
// worker pool; per-trial RNG streams keyed by trial_id make the result
// independent of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes trials.csv, summary.csv and plot.svg (plus *_untransformed.* for the
// transformed experiment) into cfg.out_dir.
void write_artifacts(const ExperimentConfig& cfg, const ExperimentResult& res);

// Self-test against the profile tolerance (paper: 0.03, ci: 0.06 on error
// curves; CLT bands are scale-aware). Returns human-readable failures.
std::vector<std::string> check_against_theory(const ExperimentConfig& cfg,
                                              const ExperimentResult& res);

// Recomputes each summary row from the trial records; used by tests and the
// summary-integrity check.
std::vector<SummaryRow> recount_summary(const ExperimentConfig& cfg,
                                        const std::vector<TrialRecord>& trials);

}  // namespace wigdet

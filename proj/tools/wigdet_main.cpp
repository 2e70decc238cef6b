#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "wigdet/errors.hpp"
#include "wigdet/experiment.hpp"
#include "wigdet/transform.hpp"

namespace {

using namespace wigdet;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitSelfTest = 4;

struct CommonFlags {
  std::string config_path;
  std::string profile;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool out_set = false;
  int workers = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
  auto* c = cmd->add_option("--config", flags.config_path, "experiment config (JSON)");
  if (config_required) c->required();
  cmd->add_option("--seed", flags.seed, "override the config seed")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--workers", flags.workers, "worker threads (0 = all cores)");
  cmd->add_option("--out", flags.out_dir, "output directory")
      ->each([&](const std::string&) { flags.out_set = true; });
  cmd->add_option("--profile", flags.profile, "self-test profile: paper or ci")
      ->check(CLI::IsMember({"paper", "ci"}));
}

Profile parse_profile(const std::string& s) {
  if (s == "paper") return Profile::paper;
  if (s == "ci") return Profile::ci;
  return Profile::none;
}

ExperimentConfig load(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config_file(flags.config_path, parse_profile(flags.profile));
  if (flags.seed_set) cfg.seed = flags.seed;
  if (flags.out_set) cfg.out_dir = flags.out_dir;
  if (flags.workers >= 0) cfg.workers = flags.workers;
  return cfg;
}

void print_summary(const ExperimentResult& res) {
  if (res.kind == ExperimentKind::clt_check) {
    std::printf("%8s %4s %12s %12s %12s %12s %6s\n", "lambda", "k", "mean",
                "m_k", "variance", "V_0", "ok");
    for (const auto& r : res.clt)
      std::printf("%8.4f %4d %12.5f %12.5f %12.5f %12.5f %6s\n", r.lambda, r.k,
                  r.sample_mean, r.mean_limit, r.sample_variance,
                  r.variance_limit, (r.mean_ok && r.variance_ok) ? "yes" : "NO");
    return;
  }
  auto print_rows = [](const std::vector<SummaryRow>& rows, const char* tag) {
    for (const auto& r : rows)
      std::printf("%-12s %8.4f  empirical %8.4f  theory %8.4f  aborted %ld\n",
                  tag, r.lambda, r.empirical_error, r.theoretical_error, r.aborted);
  };
  if (!res.baseline_summary.empty()) print_rows(res.baseline_summary, "algorithm 1");
  print_rows(res.summary, res.baseline_summary.empty() ? "lambda" : "algorithm 2");
}

int run_command(const CommonFlags& flags, ExperimentKind expected_a,
                ExperimentKind expected_b) {
  const ExperimentConfig cfg = load(flags);
  if (cfg.experiment != expected_a && cfg.experiment != expected_b)
    throw config_error("config experiment kind does not match the subcommand");
  const ExperimentResult res = run_experiment(cfg);
  write_artifacts(cfg, res);
  print_summary(res);
  std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
  if (cfg.profile != Profile::none) {
    const auto failures = check_against_theory(cfg, res);
    if (!failures.empty()) {
      for (const auto& f : failures) std::fprintf(stderr, "self-test: %s\n", f.c_str());
      return kExitSelfTest;
    }
    std::printf("self-test passed (%s profile)\n",
                cfg.profile == Profile::paper ? "paper" : "ci");
  }
  return kExitOk;
}

int run_functionals(const std::string& noise_name, const CommonFlags& flags) {
  EntryDensity g, g_d;
  if (!flags.config_path.empty()) {
    const ExperimentConfig cfg = load_config_file(flags.config_path);
    if (cfg.noise.kind == NoiseKind::custom) {
      g = EntryDensity::tabulated(cfg.noise.off_density_grid, "custom_off");
      g_d = cfg.noise.diag_density_grid.empty()
                ? g
                : EntryDensity::tabulated(cfg.noise.diag_density_grid, "custom_diag");
    } else if (cfg.noise.kind == NoiseKind::sech) {
      g = g_d = EntryDensity::sech();
    } else {
      g = g_d = EntryDensity::standard_gaussian();
    }
  } else if (noise_name == "sech") {
    g = g_d = EntryDensity::sech();
  } else if (noise_name == "gaussian") {
    g = g_d = EntryDensity::standard_gaussian();
  } else {
    throw config_error("functionals: pass --noise gaussian|sech or --config");
  }
  const DensityFunctionals f = fisher_functionals(g, g_d);
  std::printf("F^H   = %.12f\n", f.FH);
  std::printf("F^H_d = %.12f\n", f.FHd);
  std::printf("G^H   = %.12f\n", f.GH);
  std::printf("w~4   = %.12f\n", f.w4t);
  std::printf("SNR gain 1/F^H: detectable for lambda < %.12f\n", 1.0 / f.FH);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak detection and rank estimation for spiked Wigner matrices"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string noise_name;

  auto* simulate = app.add_subcommand(
      "simulate", "hypothesis-test error curves (algorithms 1 and 2)");
  add_common(simulate, flags);
  auto* clt = app.add_subcommand("clt-check", "statistic mean/variance vs the CLT");
  add_common(clt, flags);
  auto* rank = app.add_subcommand("rank", "rank-estimation error curve");
  add_common(rank, flags);
  auto* lr = app.add_subcommand("lr-oracle", "brute-force likelihood-ratio test");
  add_common(lr, flags);
  auto* fun = app.add_subcommand("functionals", "Fisher-type density functionals");
  add_common(fun, flags, /*config_required=*/false);
  fun->add_option("--noise", noise_name, "built-in density: gaussian or sech");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return run_command(flags, ExperimentKind::hypothesis,
                         ExperimentKind::hypothesis_transformed);
    if (clt->parsed())
      return run_command(flags, ExperimentKind::clt_check, ExperimentKind::clt_check);
    if (rank->parsed())
      return run_command(flags, ExperimentKind::rank, ExperimentKind::rank);
    if (lr->parsed())
      return run_command(flags, ExperimentKind::lr_oracle, ExperimentKind::lr_oracle);
    if (fun->parsed()) return run_functionals(noise_name, flags);
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const capacity_error& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return kExitNumeric;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumeric;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}

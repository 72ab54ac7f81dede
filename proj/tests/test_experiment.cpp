#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dmslice/experiment.hpp"
#include "dmslice/parallel.hpp"

using namespace dmslice;

TEST_CASE("config parsing") {
  const auto cfg = ExperimentConfig::parse("# comment\nexperiment = count  # trailing\n\nd=2\n");
  CHECK(cfg.experiment() == "count");
  CHECK(cfg.get_int("d", 0) == 2);
  CHECK_THROWS_AS(ExperimentConfig::parse("d = 1\nd = 2\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(cfg.get_int("experiment", 0), ConfigError);
}

TEST_CASE("malformed progressions name the field") {
  const auto cfg = ExperimentConfig::parse(
      "experiment = verify_slicing\nfamily = prime_sphere\nd = 2\nprogressions = 5 mod\nlambdas = 1..20\n");
  try {
    run_experiment(cfg);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "progressions");
  }
}

TEST_CASE("unknown experiment and missing keys") {
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::parse("experiment = nope\n")), ConfigError);
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::parse("experiment = sharpness\nfamily = ball\n")), ConfigError);
  try {
    run_experiment(ExperimentConfig::parse("experiment = evaluate_operator\nlambdas = 5..1\n"));
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "lambdas");
  }
}

TEST_CASE("count run keeps the conservation invariant") {
  const auto res = run_experiment(ExperimentConfig::parse("experiment = count\nfamily = sphere\nd = 3\nk = 2\nell = 1\nlambda_max = 60\n"));
  CHECK(res.exit_code == exit_ok);
  CHECK(res.summary_json.find("\"conservation\": true") != std::string::npos);
  CHECK(res.detail_csv.rfind("anchor,", 0) == 0);
}

TEST_CASE("slicing run with bundled deltas") {
  const auto dir = std::filesystem::temp_directory_path() / "dmslice_test_inputs";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "delta.txt") << "0 1\n";
  }
  auto cfg = ExperimentConfig::parse(
      "experiment = verify_slicing\nfamily = ball\nd = 1\nell = 2\ninputs = delta.txt, delta.txt\nlambdas = 1..200\nbox = -5..5\n");
  cfg.base_dir = dir.string();
  const auto res = run_experiment(cfg);
  CHECK(res.exit_code == exit_ok);
  CHECK(res.summary_json.find("\"verdict\": \"dominated\"") != std::string::npos);
  REQUIRE(res.extra_files.count("points.csv"));
  CHECK(res.extra_files.at("points.csv").find("\"(3)\",1/18,1/9,-1/18") != std::string::npos);
  cfg.entries["inputs"] = "missing.txt";
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("outputs do not depend on the worker count") {
  const auto cfg = ExperimentConfig::parse(
      "experiment = verify_slicing\nfamily = sphere\nd = 2\nell = 2\nlambdas = 1..60\ninstances = 3\nbox_radius = 4\nseed = 5\n");
  std::string base;
  for (unsigned w : {1u, 3u, 8u}) {
    parallel::ScopedWorkers scope(w);
    const auto res = run_experiment(cfg);
    const std::string all = res.summary_json + res.detail_csv;
    if (base.empty())
      base = all;
    else
      CHECK(all == base);
  }
  // a different seed gives different instances
  const auto other = run_experiment(cfg, 6);
  CHECK(other.detail_csv != run_experiment(cfg).detail_csv);
}

TEST_CASE("sharpness and framework runs") {
  const auto sh = run_experiment(ExperimentConfig::parse(
      "experiment = sharpness\nfamily = sphere\nd = 5\nk = 2\nell = 2\nr_grid = 1/2, 9/16, 5/8, 11/16, 3/4\n"));
  CHECK(sh.exit_code == exit_ok);
  CHECK(sh.summary_json.find("\"contains_critical_r\": true") != std::string::npos);
  const auto fw = run_experiment(ExperimentConfig::parse("experiment = framework_check\nsurfaces = multiplicative\nd = 2\n"));
  CHECK(fw.exit_code == exit_ok);
  const auto pr = run_experiment(ExperimentConfig::parse(
      "experiment = progressions\nprogressions = 5 mod 24, 5 mod 24\nambient = 10 mod 24\nexpect_sumset = true\n"
      "parity_lambda_max = 40\n"));
  CHECK(pr.exit_code == exit_ok);
  const auto bad = run_experiment(ExperimentConfig::parse(
      "experiment = progressions\nprogressions = 5 mod 24, 5 mod 24\nambient = 11 mod 24\nexpect_sumset = true\n"));
  CHECK(bad.exit_code == exit_claim_failed);
}

TEST_CASE("asymptotic runs") {
  const auto ok = run_experiment(ExperimentConfig::parse(
      "experiment = diagnose_asymptotic\nfamily = ball\nd = 2\nell = 1\nlambdas = 1000..4000:500\nexpect = stable\n"));
  CHECK(ok.exit_code == exit_ok);
  const auto wrong = run_experiment(ExperimentConfig::parse(
      "experiment = diagnose_asymptotic\nfamily = sphere\nd = 4\nell = 1\nphi = 2\nlambdas = 1000..4000:500\nexpect = stable\n"));
  CHECK(wrong.exit_code == exit_claim_failed);
}

TEST_CASE("experiment list") {
  CHECK(experiment_kinds().size() == 7);
}

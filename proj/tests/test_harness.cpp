#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "harness.hpp"

using namespace ftn;

namespace {

// strip the wall-clock column (the one field that legitimately varies run to
// run) before comparing sweep outputs byte for byte
std::string mask_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool past_header = false;
  while (std::getline(in, line)) {
    if (past_header && !line.empty() && line[0] != '#') {
      const auto pos = line.rfind(',');
      line = line.substr(0, pos) + ",<ms>";
    }
    if (!line.empty() && line[0] != '#' && line.find("detector,") == 0) past_header = true;
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const ExperimentConfig cfg = parse_config("");
    CHECK(cfg.block_length == 64);
    CHECK(cfg.min_error_events == 200);
    CHECK(cfg.max_bits == 20000000);
    CHECK(cfg.threshold == 1e-3);
    CHECK(cfg.q == 100);
  }
  SUBCASE("full file") {
    const std::string text =
        "# comment\n"
        "betas = 0.3, 0.5\n"
        "taus = 0.6 0.7\n"
        "ebno_db = 0, 2, 4\n"
        "block_length = 24\n"
        "detectors = sdse, sd\n"
        "min_error_events = 50\n"
        "max_bits = 2e6\n"
        "threshold = 0.001\n"
        "q = 64\n"
        "seed = 17\n"
        "edge_discard = 2\n"
        "csv_path = /tmp/out.csv\n";
    const ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.betas == std::vector<double>{0.3, 0.5});
    CHECK(cfg.taus == std::vector<double>{0.6, 0.7});
    CHECK(cfg.block_length == 24);
    CHECK(cfg.detectors == std::vector<std::string>{"sdse", "sd"});
    CHECK(cfg.max_bits == 2000000);
    CHECK(cfg.seed == 17);
    CHECK(cfg.edge_discard == 2);
    CHECK(cfg.csv_path == "/tmp/out.csv");
  }
  SUBCASE("unknown keys are errors") {
    CHECK_THROWS_AS(parse_config("block_len = 4\n"), BadConfig);
    CHECK_THROWS_AS(parse_config("betas = 0.3\nbogus = 1\n"), BadConfig);
  }
  SUBCASE("malformed values are errors") {
    CHECK_THROWS_AS(parse_config("block_length = twelve\n"), BadConfig);
    CHECK_THROWS_AS(parse_config("betas = 1.5\n"), BadConfig);
    CHECK_THROWS_AS(parse_config("detectors = viterbi\n"), BadConfig);
    CHECK_THROWS_AS(parse_config("block_length = 8\nedge_discard = 4\n"), BadConfig);
  }
}

TEST_CASE("theoretical BPSK bit error rate") {
  CHECK(theoretical_bpsk_ber(0.0) == doctest::Approx(0.5 * std::erfc(1.0)).epsilon(1e-12));
  CHECK(theoretical_bpsk_ber(0.0) == doctest::Approx(0.0786).epsilon(2e-3));
  CHECK(theoretical_bpsk_ber(20.0) < 1e-23);
  CHECK(std::abs(theoretical_bpsk_ber(-60.0) - 0.5) < 1e-3);
  for (double ber : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double snr = ebno_for_theoretical_ber(ber);
    CHECK(theoretical_bpsk_ber(snr) == doctest::Approx(ber).epsilon(1e-9));
  }
}

TEST_CASE("spectral efficiency formula") {
  CHECK(spectral_efficiency(2, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(spectral_efficiency(2, 0.3, 0.7) == doctest::Approx(1.0989).epsilon(1e-4));
  CHECK(spectral_efficiency(2, 0.3, 1.0) == doctest::Approx(0.7692).epsilon(1e-4));
  CHECK_THROWS_AS(spectral_efficiency(1, 0.3, 0.7), Error);
}

TEST_CASE("csv emission and parsing") {
  SweepResult result;
  result.seed = 5;
  result.block_length = 16;
  result.threshold = 1e-3;
  result.bands.push_back({0.3, 0.7, 10, 10});
  result.rows.push_back({"sdse", 0.3, 0.7, 4.0, 32768, 711, 711.0 / 32768, 85.25, 0.0021, 10});
  result.rows.push_back({"zf", 0.3, 0.7, 4.0, 32768, 8785, 8785.0 / 32768, 0.0, 0.0002, 0});

  const std::string text = csv_to_string(result);
  CHECK(text.find("detector,beta,tau,ebno_db,bits,errors,ber,mean_nodes,ms_per_block\n") !=
        std::string::npos);

  const std::vector<BerPoint> parsed = parse_csv(text);
  REQUIRE(parsed.size() == result.rows.size());
  for (size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].detector == result.rows[i].detector);
    CHECK(parsed[i].beta == result.rows[i].beta);  // bit-exact round trip
    CHECK(parsed[i].tau == result.rows[i].tau);
    CHECK(parsed[i].ebno_db == result.rows[i].ebno_db);
    CHECK(parsed[i].bits == result.rows[i].bits);
    CHECK(parsed[i].errors == result.rows[i].errors);
    CHECK(parsed[i].ber == result.rows[i].ber);
    CHECK(parsed[i].mean_nodes == result.rows[i].mean_nodes);
    CHECK(parsed[i].ms_per_block == result.rows[i].ms_per_block);
  }

  SweepResult empty;
  CHECK_THROWS_AS(emit_csv(empty, "/tmp/ftn_empty.csv"), Error);
  CHECK_THROWS_AS(parse_csv("beta,tau\n1,2\n"), Error);
}

TEST_CASE("zero forcing at tau = 1 reproduces the theoretical curve") {
  ExperimentConfig cfg;
  cfg.betas = {0.3};
  cfg.taus = {1.0};
  cfg.ebno_db = {6.0};
  cfg.block_length = 64;
  cfg.detectors = {"zf"};
  cfg.min_error_events = 300;
  cfg.max_bits = 4000000;
  cfg.seed = 31;
  const SweepResult result = run_ber_sweep(cfg);
  REQUIRE(result.rows.size() == 1);
  const BerPoint& p = result.rows.front();
  const double want = theoretical_bpsk_ber(6.0);
  const double se = std::sqrt(want * (1.0 - want) / static_cast<double>(p.bits));
  CHECK(std::abs(p.ber - want) <= 3.0 * se);
  // estimator sanity: with >= 200 error events the relative standard error
  // stays below 1/sqrt(200)
  CHECK(p.errors >= 200);
  CHECK(std::sqrt(p.ber * (1 - p.ber) / p.bits) / p.ber <= 0.0712);
}

TEST_CASE("sweeps are reproducible and worker-count invariant") {
  ExperimentConfig cfg;
  cfg.betas = {0.3};
  cfg.taus = {0.7};
  cfg.ebno_db = {2.0, 4.0};
  cfg.block_length = 16;
  cfg.detectors = {"zf", "sdse"};
  cfg.min_error_events = 64;
  cfg.max_bits = 100000;
  cfg.seed = 77;

  setenv("FTN_WORKERS", "1", 1);
  const std::string first = mask_timing(csv_to_string(run_ber_sweep(cfg)));
  const std::string second = mask_timing(csv_to_string(run_ber_sweep(cfg)));
  CHECK(first == second);
  setenv("FTN_WORKERS", "3", 1);
  const std::string parallel = mask_timing(csv_to_string(run_ber_sweep(cfg)));
  unsetenv("FTN_WORKERS");
  CHECK(first == parallel);
}

TEST_CASE("sdse walks in lockstep with the exhaustive oracle") {
  ExperimentConfig cfg;
  cfg.betas = {0.3};
  cfg.taus = {0.7};
  cfg.ebno_db = {4.0};
  cfg.block_length = 12;
  cfg.min_error_events = 80;
  cfg.max_bits = 60000;
  cfg.seed = 123;

  cfg.detectors = {"sdse"};
  const SweepResult fast = run_ber_sweep(cfg);
  cfg.detectors = {"mlse"};
  const SweepResult ref = run_ber_sweep(cfg);
  REQUIRE(fast.rows.size() == 1);
  REQUIRE(ref.rows.size() == 1);
  CHECK(fast.rows[0].bits == ref.rows[0].bits);
  CHECK(fast.rows[0].errors == ref.rows[0].errors);
}

TEST_CASE("failed points are recorded without aborting the sweep") {
  ExperimentConfig cfg;
  cfg.betas = {0.3};
  cfg.taus = {1.0};
  cfg.ebno_db = {4.0, 6.0};
  cfg.block_length = 30;  // exhaustive search refuses 2^30
  cfg.detectors = {"mlse", "zf"};
  cfg.min_error_events = 10;
  cfg.max_bits = 10000;
  cfg.seed = 3;
  const SweepResult result = run_ber_sweep(cfg);
  CHECK(result.rows.size() == 2);  // the zf points survive
  for (const BerPoint& p : result.rows) CHECK(p.detector == "zf");
  CHECK(result.failures.size() == 2);
  CHECK(result.failures[0].find("mlse") != std::string::npos);
}

TEST_CASE("svg plot emission") {
  SweepResult result;
  result.rows.push_back({"sdse", 0.3, 0.7, 2.0, 1000, 50, 0.05, 10, 0.1, 0});
  result.rows.push_back({"sdse", 0.3, 0.7, 4.0, 1000, 20, 0.02, 10, 0.1, 0});
  result.rows.push_back({"sd", 0.3, 0.7, 2.0, 1000, 80, 0.08, 10, 0.1, 0});
  result.rows.push_back({"sd", 0.3, 0.7, 4.0, 1000, 35, 0.035, 10, 0.1, 0});
  const std::string path = "/tmp/ftn_test_plot.svg";
  emit_plot(result.rows, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string svg = ss.str();
  CHECK(svg.find("<svg") != std::string::npos);
  // two detector series plus the theoretical reference
  size_t polylines = 0;
  for (size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
    ++polylines;
  CHECK(polylines == 3);
  CHECK(svg.find("BER") != std::string::npos);

  CHECK_THROWS_AS(emit_plot({}, path), Error);
}

TEST_CASE("find_min_tau on degenerate targets") {
  ExperimentConfig cfg;
  cfg.block_length = 16;
  cfg.min_error_events = 50;
  cfg.max_bits = 50000;
  cfg.seed = 5;
  SUBCASE("everything is feasible at target 0.5") {
    CHECK(find_min_tau(0.3, 0.5, 8.0, "zf", cfg) == doctest::Approx(0.5));
  }
  SUBCASE("unreachable target throws") {
    CHECK_THROWS_AS(find_min_tau(0.3, 1e-4, -5.0, "zf", cfg), TargetUnreachable);
  }
}

TEST_SUITE_END();

#ifndef FTN_HARNESS_HPP
#define FTN_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "detectors.hpp"
#include "sdr_relax.hpp"

namespace ftn {

/// Monte Carlo sweep configuration. Field names double as the config-file
/// keys; unknown keys in a file are errors.
struct ExperimentConfig {
  std::vector<double> betas{0.3};
  std::vector<double> taus{0.7};
  std::vector<double> ebno_db{0, 2, 4, 6, 8};
  int block_length = 64;
  std::vector<std::string> detectors{"sdse"};
  long long min_error_events = 200;
  long long max_bits = 20000000;
  double threshold = 1e-3;
  int band_cap = 64;
  int q = 100;                 // SDRSE randomization draws
  std::uint64_t seed = 1;
  int edge_discard = 0;        // symbols ignored at each block edge when counting errors
  std::string csv_path;
  std::string svg_path;

  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
/// Apply one "key = value" assignment (same grammar as the file).
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct BerPoint {
  std::string detector;
  double beta = 0.0;
  double tau = 0.0;
  double ebno_db = 0.0;
  long long bits = 0;
  long long errors = 0;
  double ber = 0.0;
  double mean_nodes = 0.0;
  double ms_per_block = 0.0;
  int max_update_terms = 0;  // instrumentation only; not part of the CSV
};

struct SweepResult {
  std::vector<BerPoint> rows;
  // metadata recorded in CSV comments: effective band per (beta, tau) and
  // any points that failed to run
  struct BandInfo { double beta, tau; int band_length; int threshold_length; };
  std::vector<BandInfo> bands;
  std::vector<std::string> failures;
  std::uint64_t seed = 0;
  int block_length = 0;
  double threshold = 0.0;
};

/// Run the full (detector, beta, tau, Eb/N0) grid. Each point accumulates
/// until min_error_events or max_bits, in fixed-size rounds so the outcome is
/// identical for any worker count (FTN_WORKERS selects parallelism).
/// A point that throws is recorded as a failure and the sweep continues.
SweepResult run_ber_sweep(const ExperimentConfig& cfg);

/// Fixed number of blocks per point; for node-count and timing comparisons.
SweepResult run_bench(const ExperimentConfig& cfg, int blocks_per_point);

/// Q(sqrt(2 * 10^(ebno_db/10))): the no-ISI BPSK bit error rate.
double theoretical_bpsk_ber(double ebno_db);

/// Inverse of theoretical_bpsk_ber (bisection); needs 0 < ber < 0.5.
double ebno_for_theoretical_ber(double ber);

/// log2(m) / ((1 + beta) * tau) bits/s/Hz.
double spectral_efficiency(int m, double beta, double tau);

/// Smallest tau on the grid {0.50, 0.51, ..., 1.00} whose measured BER is
/// at or below target_ber within the Monte Carlo confidence bound, found by
/// bisection (BER is treated as monotone in tau). A tau whose system cannot
/// be built counts as infeasible. Throws TargetUnreachable when tau = 1
/// already misses the target.
double find_min_tau(double beta, double target_ber, double ebno_db,
                    const std::string& detector, const ExperimentConfig& cfg);

struct SePoint {
  double beta = 0.0;
  double tau = 0.0;        // from find_min_tau
  double se_ftn = 0.0;
  double se_nyquist = 0.0;
  double ratio = 0.0;
};

std::vector<SePoint> run_se_curve(const std::vector<double>& betas, double target_ber,
                                  double ebno_db, const std::string& detector,
                                  const ExperimentConfig& cfg);

/// CSV with the exact header
/// detector,beta,tau,ebno_db,bits,errors,ber,mean_nodes,ms_per_block and a
/// #-comment metadata block (version, seed, N, L, threshold). Doubles are
/// written in shortest round-trip form.
void emit_csv(const SweepResult& result, const std::string& path);
std::string csv_to_string(const SweepResult& result);
std::vector<BerPoint> parse_csv(const std::string& text);

/// BER-vs-Eb/N0 figure (SVG, log BER axis) with one series per
/// (detector, beta, tau) plus the theoretical BPSK reference.
void emit_plot(const std::vector<BerPoint>& rows, const std::string& path);

void emit_se_csv(const std::vector<SePoint>& rows, const std::string& path);
void emit_se_plot(const std::vector<SePoint>& rows, const std::string& path);

/// Worker threads for sweeps: FTN_WORKERS, else hardware concurrency.
int worker_count();

/// Dispatch a single detection by detector name
/// ("zf" | "mlse" | "sd" | "sdse" | "sdrse"); sdr_seed feeds the SDRSE
/// randomization stream.
DetectorOutput detect_with(const std::string& name, const FtnSystem& system,
                           const ReceivedBlock& block, int q, std::uint64_t sdr_seed);

}  // namespace ftn

#endif

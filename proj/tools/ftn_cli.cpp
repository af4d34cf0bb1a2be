// Command-line driver for the FTN detection library. Talks to the shared
// library exclusively through the C API in ftn/ftn.h.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftn/ftn.h"

namespace {

struct SystemDeleter {
  void operator()(ftn_system* s) const { ftn_system_free(s); }
};
struct ExperimentDeleter {
  void operator()(ftn_experiment* e) const { ftn_experiment_free(e); }
};
struct SweepDeleter {
  void operator()(ftn_sweep* s) const { ftn_sweep_free(s); }
};

using SystemPtr = std::unique_ptr<ftn_system, SystemDeleter>;
using ExperimentPtr = std::unique_ptr<ftn_experiment, ExperimentDeleter>;
using SweepPtr = std::unique_ptr<ftn_sweep, SweepDeleter>;

int die(ftn_status st, const char* context) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", context, ftn_last_error(), ftn_status_string(st));
  return 1;
}

SystemPtr make_system(double beta, double tau, int n, double threshold, bool* ok) {
  ftn_system* raw = nullptr;
  const ftn_status st = ftn_system_create(beta, tau, n, threshold, &raw);
  *ok = st == FTN_OK;
  if (!*ok) die(st, "building FTN system");
  return SystemPtr(raw);
}

ExperimentPtr load_experiment(const std::string& config_path,
                              const std::vector<std::string>& overrides, bool* ok) {
  ftn_experiment* raw = nullptr;
  ftn_status st = config_path.empty() ? ftn_experiment_parse("", &raw)
                                      : ftn_experiment_parse_file(config_path.c_str(), &raw);
  *ok = st == FTN_OK;
  if (!*ok) {
    die(st, "loading experiment config");
    return nullptr;
  }
  ExperimentPtr exp(raw);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      *ok = false;
      return nullptr;
    }
    st = ftn_experiment_set(exp.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != FTN_OK) {
      die(st, "applying --set override");
      *ok = false;
      return nullptr;
    }
  }
  return exp;
}

void print_sweep(const ftn_sweep* sweep) {
  std::printf("%-6s %-6s %-5s %-8s %12s %9s %12s %12s %10s\n", "det", "beta", "tau", "ebno_db",
              "bits", "errors", "ber", "mean_nodes", "ms/block");
  const int n = ftn_sweep_row_count(sweep);
  for (int i = 0; i < n; ++i) {
    ftn_ber_point p;
    if (ftn_sweep_row(sweep, i, &p) != FTN_OK) continue;
    std::printf("%-6s %-6g %-5g %-8g %12lld %9lld %12.5g %12.1f %10.3f\n", p.detector, p.beta,
                p.tau, p.ebno_db, p.bits, p.errors, p.ber, p.mean_nodes, p.ms_per_block);
  }
  const int nf = ftn_sweep_failure_count(sweep);
  for (int i = 0; i < nf; ++i) std::printf("failed: %s\n", ftn_sweep_failure(sweep, i));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("ftn ") + ftn_version() +
               " - binary faster-than-Nyquist signaling detection"};
  app.require_subcommand(1);

  // ---- gram ----
  auto* gram = app.add_subcommand("gram", "dump the ISI (Gram) matrix as CSV");
  int g_n = 16;
  double g_tau = 0.7, g_beta = 0.3, g_thr = 1e-3;
  std::string g_out = "-";
  gram->add_option("--n", g_n, "block length");
  gram->add_option("--tau", g_tau, "time packing factor");
  gram->add_option("--beta", g_beta, "roll-off factor");
  gram->add_option("--threshold", g_thr, "band truncation threshold");
  gram->add_option("--out", g_out, "output path ('-' for stdout)");

  // ---- detect ----
  auto* det = app.add_subcommand("detect", "simulate and detect a single block");
  std::string d_detector = "sdse";
  int d_n = 16, d_q = 100;
  double d_tau = 0.7, d_beta = 0.3, d_thr = 1e-3, d_ebno = 6.0;
  unsigned long long d_seed = 1;
  det->add_option("--detector", d_detector, "zf|mlse|sd|sdse|sdrse")->capture_default_str();
  det->add_option("--n", d_n, "block length");
  det->add_option("--tau", d_tau, "time packing factor");
  det->add_option("--beta", d_beta, "roll-off factor");
  det->add_option("--threshold", d_thr, "band truncation threshold");
  det->add_option("--ebno", d_ebno, "Eb/N0 in dB");
  det->add_option("--seed", d_seed, "block seed");
  det->add_option("--q", d_q, "SDRSE randomization draws");

  // ---- ber ----
  auto* ber = app.add_subcommand("ber", "Monte Carlo BER sweep from a config file");
  std::string b_config;
  std::vector<std::string> b_set;
  std::string b_csv, b_svg;
  ber->add_option("--config", b_config, "experiment config file");
  ber->add_option("--set", b_set, "override config entries (key=value)");
  ber->add_option("--csv", b_csv, "CSV output path (overrides csv_path)");
  ber->add_option("--svg", b_svg, "SVG plot path (overrides svg_path)");

  // ---- se ----
  auto* se = app.add_subcommand("se", "spectral-efficiency curve at a target BER");
  std::string s_config;
  std::vector<std::string> s_set;
  std::vector<double> s_betas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  double s_target = 1e-4, s_ebno = 12.0;
  std::string s_detector = "sdse", s_csv, s_svg;
  se->add_option("--config", s_config, "experiment config file (budgets, N, seed)");
  se->add_option("--set", s_set, "override config entries (key=value)");
  se->add_option("--betas", s_betas, "roll-off grid")->delimiter(',');
  se->add_option("--target-ber", s_target, "BER target");
  se->add_option("--ebno", s_ebno, "operating Eb/N0 in dB");
  se->add_option("--detector", s_detector, "detector to qualify");
  se->add_option("--csv", s_csv, "CSV output path");
  se->add_option("--svg", s_svg, "SVG output path");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "node-count and timing comparison");
  std::string n_config;
  std::vector<std::string> n_set;
  int n_blocks = 200;
  std::string n_csv;
  bench->add_option("--config", n_config, "experiment config file");
  bench->add_option("--set", n_set, "override config entries (key=value)");
  bench->add_option("--blocks", n_blocks, "blocks per sweep point");
  bench->add_option("--csv", n_csv, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  if (gram->parsed()) {
    bool ok = false;
    SystemPtr sys = make_system(g_beta, g_tau, g_n, g_thr, &ok);
    if (!ok) return 1;
    const ftn_status st = ftn_system_write_gram_csv(sys.get(), g_out.c_str());
    if (st != FTN_OK) return die(st, "writing gram CSV");
    if (g_out != "-")
      std::printf("wrote %s (n=%d, L=%d)\n", g_out.c_str(), ftn_system_block_length(sys.get()),
                  ftn_system_band_length(sys.get()));
    return 0;
  }

  if (det->parsed()) {
    bool ok = false;
    SystemPtr sys = make_system(d_beta, d_tau, d_n, d_thr, &ok);
    if (!ok) return 1;
    std::vector<int> tx(static_cast<size_t>(d_n)), rx(static_cast<size_t>(d_n));
    ftn_detect_stats stats;
    const ftn_status st = ftn_detect_block(sys.get(), d_detector.c_str(), d_ebno, d_seed, d_q,
                                           tx.data(), rx.data(), &stats);
    if (st != FTN_OK) return die(st, "detecting block");
    std::printf("detector=%s beta=%g tau=%g n=%d L=%d ebno=%g dB seed=%llu\n", d_detector.c_str(),
                d_beta, d_tau, d_n, ftn_system_band_length(sys.get()), d_ebno, d_seed);
    std::printf("tx bits: ");
    for (int b : tx) std::printf("%d", b);
    std::printf("\nrx bits: ");
    for (int b : rx) std::printf("%d", b);
    std::printf("\nbit errors: %d\n", stats.bit_errors);
    std::printf("metric: %.12g\n", stats.metric);
    if (d_detector == "sdrse") std::printf("sdr lower bound: %.12g\n", stats.sdr_lower_bound);
    std::printf("nodes visited: %lld, radius updates: %lld, max update terms: %d\n",
                stats.nodes_visited, stats.radius_updates, stats.max_update_terms);
    std::printf("elapsed: %.3f ms\n", stats.ms_elapsed);
    return 0;
  }

  if (ber->parsed()) {
    bool ok = false;
    ExperimentPtr exp = load_experiment(b_config, b_set, &ok);
    if (!ok) return 1;
    ftn_sweep* raw = nullptr;
    const ftn_status st = ftn_run_ber_sweep(exp.get(), &raw);
    if (st != FTN_OK) return die(st, "running BER sweep");
    SweepPtr sweep(raw);
    print_sweep(sweep.get());
    if (!b_csv.empty()) {
      const ftn_status cs = ftn_sweep_write_csv(sweep.get(), b_csv.c_str());
      if (cs != FTN_OK) return die(cs, "writing CSV");
      std::printf("wrote %s\n", b_csv.c_str());
    }
    if (!b_svg.empty()) {
      const ftn_status ps = ftn_sweep_write_svg(sweep.get(), b_svg.c_str());
      if (ps != FTN_OK) return die(ps, "writing SVG");
      std::printf("wrote %s\n", b_svg.c_str());
    }
    return 0;
  }

  if (se->parsed()) {
    bool ok = false;
    ExperimentPtr exp = load_experiment(s_config, s_set, &ok);
    if (!ok) return 1;
    std::vector<ftn_se_point> rows(s_betas.size());
    const ftn_status st =
        ftn_run_se_curve(exp.get(), s_betas.data(), static_cast<int>(s_betas.size()), s_target,
                         s_ebno, s_detector.c_str(), rows.data());
    if (st != FTN_OK) return die(st, "running spectral-efficiency curve");
    std::printf("%-6s %-8s %-10s %-12s %-8s\n", "beta", "tau_min", "se_ftn", "se_nyquist",
                "ratio");
    for (const auto& p : rows)
      std::printf("%-6g %-8g %-10.5g %-12.5g %-8.5g\n", p.beta, p.tau, p.se_ftn, p.se_nyquist,
                  p.ratio);
    if (!s_csv.empty()) {
      const ftn_status cs =
          ftn_se_write_csv(rows.data(), static_cast<int>(rows.size()), s_csv.c_str());
      if (cs != FTN_OK) return die(cs, "writing CSV");
      std::printf("wrote %s\n", s_csv.c_str());
    }
    if (!s_svg.empty()) {
      const ftn_status ps =
          ftn_se_write_svg(rows.data(), static_cast<int>(rows.size()), s_svg.c_str());
      if (ps != FTN_OK) return die(ps, "writing SVG");
      std::printf("wrote %s\n", s_svg.c_str());
    }
    return 0;
  }

  if (bench->parsed()) {
    bool ok = false;
    ExperimentPtr exp = load_experiment(n_config, n_set, &ok);
    if (!ok) return 1;
    ftn_sweep* raw = nullptr;
    const ftn_status st = ftn_run_bench(exp.get(), n_blocks, &raw);
    if (st != FTN_OK) return die(st, "running bench");
    SweepPtr sweep(raw);
    print_sweep(sweep.get());
    if (!n_csv.empty()) {
      const ftn_status cs = ftn_sweep_write_csv(sweep.get(), n_csv.c_str());
      if (cs != FTN_OK) return die(cs, "writing CSV");
      std::printf("wrote %s\n", n_csv.c_str());
    }
    return 0;
  }

  return 0;
}

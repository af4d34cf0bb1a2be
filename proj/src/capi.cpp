#include "ftn/ftn.h"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "harness.hpp"
#include "version.hpp"

using namespace ftn;

namespace {

thread_local std::string g_last_error;

ftn_status fail(ftn_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

ftn_status map_exception() {
  try {
    throw;
  } catch (const NotPositiveDefinite& e) {
    return fail(FTN_E_NOT_POSITIVE_DEFINITE, e.what());
  } catch (const RankDeficient& e) {
    return fail(FTN_E_RANK_DEFICIENT, e.what());
  } catch (const SingularDiagonal& e) {
    return fail(FTN_E_SINGULAR_DIAGONAL, e.what());
  } catch (const BandTooLong& e) {
    return fail(FTN_E_BAND_TOO_LONG, e.what());
  } catch (const BlockTooLarge& e) {
    return fail(FTN_E_BLOCK_TOO_LARGE, e.what());
  } catch (const NotConverged& e) {
    return fail(FTN_E_NOT_CONVERGED, e.what());
  } catch (const TargetUnreachable& e) {
    return fail(FTN_E_TARGET_UNREACHABLE, e.what());
  } catch (const BadConfig& e) {
    return fail(FTN_E_BAD_CONFIG, e.what());
  } catch (const Error& e) {
    return fail(FTN_E_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(FTN_E_INTERNAL, e.what());
  } catch (...) {
    return fail(FTN_E_INTERNAL, "unknown error");
  }
}

}  // namespace

struct ftn_system {
  FtnSystem sys;
};

struct ftn_experiment {
  ExperimentConfig cfg;
};

struct ftn_sweep {
  SweepResult result;
};

extern "C" {

const char* ftn_status_string(ftn_status status) {
  switch (status) {
    case FTN_OK: return "ok";
    case FTN_E_INVALID_ARG: return "invalid argument";
    case FTN_E_NOT_POSITIVE_DEFINITE: return "matrix not positive definite";
    case FTN_E_RANK_DEFICIENT: return "rank-deficient matrix";
    case FTN_E_SINGULAR_DIAGONAL: return "singular diagonal";
    case FTN_E_BAND_TOO_LONG: return "ISI band too long";
    case FTN_E_BLOCK_TOO_LARGE: return "block too large for exhaustive search";
    case FTN_E_NOT_CONVERGED: return "solver did not converge";
    case FTN_E_TARGET_UNREACHABLE: return "BER target unreachable";
    case FTN_E_BAD_CONFIG: return "bad configuration";
    case FTN_E_IO: return "i/o error";
    case FTN_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ftn_last_error(void) { return g_last_error.c_str(); }

const char* ftn_version(void) { return kVersion; }

ftn_status ftn_system_create(double beta, double tau, int n, double threshold,
                             ftn_system** out) {
  if (out == nullptr) return fail(FTN_E_INVALID_ARG, "out is null");
  *out = nullptr;
  try {
    auto* handle = new ftn_system{make_ftn_system(beta, tau, n, threshold)};
    *out = handle;
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

void ftn_system_free(ftn_system* system) { delete system; }

int ftn_system_block_length(const ftn_system* system) {
  return system == nullptr ? 0 : system->sys.dim();
}

int ftn_system_band_length(const ftn_system* system) {
  return system == nullptr ? 0 : system->sys.band.length();
}

int ftn_system_threshold_band_length(const ftn_system* system) {
  return system == nullptr ? 0 : system->sys.threshold_band_length;
}

double ftn_system_gram_entry(const ftn_system* system, int i, int j) {
  if (system == nullptr) return 0.0;
  const int n = system->sys.dim();
  if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
  return system->sys.gram.matrix(i, j);
}

ftn_status ftn_system_write_gram_csv(const ftn_system* system, const char* path) {
  if (system == nullptr || path == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  try {
    const FtnSystem& sys = system->sys;
    std::ostringstream os;
    os << "# ftn " << kVersion << " gram matrix\n";
    os << "# n=" << sys.dim() << " beta=" << sys.pulse.beta << " tau=" << sys.band.tau
       << " L=" << sys.band.length() << " threshold_L=" << sys.threshold_band_length << "\n";
    for (int i = 0; i < sys.dim(); ++i) {
      for (int j = 0; j < sys.dim(); ++j) {
        if (j > 0) os << ',';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", sys.gram.matrix(i, j));
        os << buf;
      }
      os << '\n';
    }
    if (std::strcmp(path, "-") == 0) {
      std::fputs(os.str().c_str(), stdout);
    } else {
      std::ofstream f(path, std::ios::binary);
      if (!f) return fail(FTN_E_IO, std::string("cannot open ") + path);
      f << os.str();
      if (!f) return fail(FTN_E_IO, std::string("write failed for ") + path);
    }
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_detect_block(const ftn_system* system, const char* detector, double ebno_db,
                            unsigned long long seed, int q, int* tx_bits, int* rx_bits,
                            ftn_detect_stats* stats) {
  if (system == nullptr || detector == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  try {
    const FtnSystem& sys = system->sys;
    const int n = sys.dim();
    Rng rng = Rng::substream(seed, {0x70ULL});
    std::vector<int> bits(n);
    for (int& b : bits) b = rng.bit();
    const SymbolBlock a = modulate(bits);
    ChannelConfig ch;
    ch.sigma = ebno_to_sigma(ebno_db, 1.0, 1);
    ch.gram = &sys.gram;
    const ReceivedBlock block = transmit(a, ch, sys.chol, rng);

    const auto t0 = std::chrono::steady_clock::now();
    const DetectorOutput out = detect_with(detector, sys, block, q < 1 ? 1 : q, seed ^ 0x5dULL);
    const auto t1 = std::chrono::steady_clock::now();

    const std::vector<int> rx = demodulate(out.decision);
    int errors = 0;
    for (int i = 0; i < n; ++i) {
      if (tx_bits != nullptr) tx_bits[i] = bits[i];
      if (rx_bits != nullptr) rx_bits[i] = rx[i];
      if (rx[i] != bits[i]) ++errors;
    }
    if (stats != nullptr) {
      stats->metric = out.metric;
      stats->sdr_lower_bound = out.sdr_lower_bound;
      stats->nodes_visited = out.nodes_visited;
      stats->radius_updates = out.radius_updates;
      stats->max_update_terms = out.max_update_terms;
      stats->bit_errors = errors;
      stats->ms_elapsed = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

double ftn_theoretical_bpsk_ber(double ebno_db) { return theoretical_bpsk_ber(ebno_db); }

double ftn_spectral_efficiency(int m, double beta, double tau) {
  try {
    return spectral_efficiency(m, beta, tau);
  } catch (...) {
    map_exception();
    return -1.0;
  }
}

double ftn_ebno_to_sigma(double ebno_db, double symbol_energy, int bits_per_symbol) {
  try {
    return ebno_to_sigma(ebno_db, symbol_energy, bits_per_symbol);
  } catch (...) {
    map_exception();
    return -1.0;
  }
}

ftn_status ftn_experiment_parse(const char* text, ftn_experiment** out) {
  if (text == nullptr || out == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  *out = nullptr;
  try {
    auto* handle = new ftn_experiment{parse_config(text)};
    *out = handle;
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_experiment_parse_file(const char* path, ftn_experiment** out) {
  if (path == nullptr || out == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  *out = nullptr;
  try {
    auto* handle = new ftn_experiment{parse_config_file(path)};
    *out = handle;
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_experiment_set(ftn_experiment* experiment, const char* key, const char* value) {
  if (experiment == nullptr || key == nullptr || value == nullptr)
    return fail(FTN_E_INVALID_ARG, "null argument");
  try {
    apply_config_entry(experiment->cfg, key, value);
    experiment->cfg.validate();
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

void ftn_experiment_free(ftn_experiment* experiment) { delete experiment; }

ftn_status ftn_run_ber_sweep(const ftn_experiment* experiment, ftn_sweep** out) {
  if (experiment == nullptr || out == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  *out = nullptr;
  try {
    auto* handle = new ftn_sweep{run_ber_sweep(experiment->cfg)};
    *out = handle;
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_run_bench(const ftn_experiment* experiment, int blocks_per_point,
                         ftn_sweep** out) {
  if (experiment == nullptr || out == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  *out = nullptr;
  try {
    auto* handle = new ftn_sweep{run_bench(experiment->cfg, blocks_per_point)};
    *out = handle;
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

void ftn_sweep_free(ftn_sweep* sweep) { delete sweep; }

int ftn_sweep_row_count(const ftn_sweep* sweep) {
  return sweep == nullptr ? 0 : static_cast<int>(sweep->result.rows.size());
}

ftn_status ftn_sweep_row(const ftn_sweep* sweep, int index, ftn_ber_point* out) {
  if (sweep == nullptr || out == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  if (index < 0 || index >= static_cast<int>(sweep->result.rows.size()))
    return fail(FTN_E_INVALID_ARG, "row index out of range");
  const BerPoint& p = sweep->result.rows[static_cast<size_t>(index)];
  std::snprintf(out->detector, sizeof out->detector, "%s", p.detector.c_str());
  out->beta = p.beta;
  out->tau = p.tau;
  out->ebno_db = p.ebno_db;
  out->bits = p.bits;
  out->errors = p.errors;
  out->ber = p.ber;
  out->mean_nodes = p.mean_nodes;
  out->ms_per_block = p.ms_per_block;
  return FTN_OK;
}

int ftn_sweep_failure_count(const ftn_sweep* sweep) {
  return sweep == nullptr ? 0 : static_cast<int>(sweep->result.failures.size());
}

const char* ftn_sweep_failure(const ftn_sweep* sweep, int index) {
  if (sweep == nullptr || index < 0 ||
      index >= static_cast<int>(sweep->result.failures.size()))
    return nullptr;
  return sweep->result.failures[static_cast<size_t>(index)].c_str();
}

ftn_status ftn_sweep_write_csv(const ftn_sweep* sweep, const char* path) {
  if (sweep == nullptr || path == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  try {
    emit_csv(sweep->result, path);
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_sweep_write_svg(const ftn_sweep* sweep, const char* path) {
  if (sweep == nullptr || path == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  try {
    emit_plot(sweep->result.rows, path);
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_find_min_tau(const ftn_experiment* experiment, double beta, double target_ber,
                            double ebno_db, const char* detector, double* tau_out) {
  if (experiment == nullptr || detector == nullptr || tau_out == nullptr)
    return fail(FTN_E_INVALID_ARG, "null argument");
  try {
    *tau_out = find_min_tau(beta, target_ber, ebno_db, detector, experiment->cfg);
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_run_se_curve(const ftn_experiment* experiment, const double* betas, int n_betas,
                            double target_ber, double ebno_db, const char* detector,
                            ftn_se_point* rows) {
  if (experiment == nullptr || betas == nullptr || detector == nullptr || rows == nullptr)
    return fail(FTN_E_INVALID_ARG, "null argument");
  if (n_betas < 1) return fail(FTN_E_INVALID_ARG, "n_betas must be >= 1");
  try {
    const std::vector<double> bl(betas, betas + n_betas);
    const std::vector<SePoint> pts =
        run_se_curve(bl, target_ber, ebno_db, detector, experiment->cfg);
    for (int i = 0; i < n_betas; ++i) {
      rows[i].beta = pts[static_cast<size_t>(i)].beta;
      rows[i].tau = pts[static_cast<size_t>(i)].tau;
      rows[i].se_ftn = pts[static_cast<size_t>(i)].se_ftn;
      rows[i].se_nyquist = pts[static_cast<size_t>(i)].se_nyquist;
      rows[i].ratio = pts[static_cast<size_t>(i)].ratio;
    }
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_se_write_csv(const ftn_se_point* rows, int n_rows, const char* path) {
  if (rows == nullptr || path == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  if (n_rows < 1) return fail(FTN_E_INVALID_ARG, "n_rows must be >= 1");
  try {
    std::vector<SePoint> pts(static_cast<size_t>(n_rows));
    for (int i = 0; i < n_rows; ++i)
      pts[static_cast<size_t>(i)] = {rows[i].beta, rows[i].tau, rows[i].se_ftn,
                                     rows[i].se_nyquist, rows[i].ratio};
    emit_se_csv(pts, path);
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

ftn_status ftn_se_write_svg(const ftn_se_point* rows, int n_rows, const char* path) {
  if (rows == nullptr || path == nullptr) return fail(FTN_E_INVALID_ARG, "null argument");
  if (n_rows < 1) return fail(FTN_E_INVALID_ARG, "n_rows must be >= 1");
  try {
    std::vector<SePoint> pts(static_cast<size_t>(n_rows));
    for (int i = 0; i < n_rows; ++i)
      pts[static_cast<size_t>(i)] = {rows[i].beta, rows[i].tau, rows[i].se_ftn,
                                     rows[i].se_nyquist, rows[i].ratio};
    emit_se_plot(pts, path);
    return FTN_OK;
  } catch (...) {
    return map_exception();
  }
}

}  // extern "C"

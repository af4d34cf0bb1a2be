/*
 * C interface to the FTN detection library.
 *
 * The library simulates binary faster-than-Nyquist signaling over the
 * matched-filter channel y = G a + w with colored noise w ~ N(0, sigma^2 G),
 * and detects blocks with a zero-forcing slicer, exhaustive MLSE, a standard
 * (unwhitened) sphere decoder, the whitened banded sphere-decoder sequence
 * estimator (SDSE), and a semidefinite-relaxation estimator (SDRSE).
 *
 * All functions return ftn_status; FTN_OK is zero. On failure,
 * ftn_last_error() carries a thread-local description. Handles are opaque
 * and freed with their matching *_free function.
 */
#ifndef FTN_FTN_H
#define FTN_FTN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ftn_status {
  FTN_OK = 0,
  FTN_E_INVALID_ARG = 1,
  FTN_E_NOT_POSITIVE_DEFINITE = 2,
  FTN_E_RANK_DEFICIENT = 3,
  FTN_E_SINGULAR_DIAGONAL = 4,
  FTN_E_BAND_TOO_LONG = 5,
  FTN_E_BLOCK_TOO_LARGE = 6,
  FTN_E_NOT_CONVERGED = 7,
  FTN_E_TARGET_UNREACHABLE = 8,
  FTN_E_BAD_CONFIG = 9,
  FTN_E_IO = 10,
  FTN_E_INTERNAL = 11
} ftn_status;

const char* ftn_status_string(ftn_status status);
const char* ftn_last_error(void);
const char* ftn_version(void);

/* ------------------------------------------------------------------ */
/* FTN system: pulse + ISI band + Gram matrix + Cholesky factor        */

typedef struct ftn_system ftn_system;

/* Build the system for roll-off beta, packing tau, block length n and
 * band-truncation threshold (on |g(k tau T)|). The band is extended
 * automatically if truncation breaks positive definiteness. */
ftn_status ftn_system_create(double beta, double tau, int n, double threshold,
                             ftn_system** out);
void ftn_system_free(ftn_system* system);

int ftn_system_block_length(const ftn_system* system);
/* Effective ISI band length L (matrix half-bandwidth is L - 1). */
int ftn_system_band_length(const ftn_system* system);
/* Band length the truncation threshold alone produced. */
int ftn_system_threshold_band_length(const ftn_system* system);
/* Entry G[i][j] (0-based); 0 when out of range. */
double ftn_system_gram_entry(const ftn_system* system, int i, int j);
/* Dump G as CSV with a metadata comment block. path "-" writes to stdout. */
ftn_status ftn_system_write_gram_csv(const ftn_system* system, const char* path);

/* ------------------------------------------------------------------ */
/* Single-block detection                                              */

typedef struct ftn_detect_stats {
  double metric;          /* (z - a)' G (z - a) of the decision */
  double sdr_lower_bound; /* certified SDR bound (sdrse only, else NaN) */
  long long nodes_visited;
  long long radius_updates;
  int max_update_terms;   /* widest partial-metric update (<= L for sdse) */
  int bit_errors;
  double ms_elapsed;
} ftn_detect_stats;

/* Simulate one seeded block at the given Eb/N0 and detect it.
 * detector is one of "zf" | "mlse" | "sd" | "sdse" | "sdrse".
 * q is the SDRSE randomization count (ignored elsewhere).
 * tx_bits and rx_bits are caller buffers of length n (either may be NULL).
 * stats may be NULL. */
ftn_status ftn_detect_block(const ftn_system* system, const char* detector, double ebno_db,
                            unsigned long long seed, int q, int* tx_bits, int* rx_bits,
                            ftn_detect_stats* stats);

/* ------------------------------------------------------------------ */
/* Scalar helpers                                                      */

double ftn_theoretical_bpsk_ber(double ebno_db);
double ftn_spectral_efficiency(int m, double beta, double tau);
double ftn_ebno_to_sigma(double ebno_db, double symbol_energy, int bits_per_symbol);

/* ------------------------------------------------------------------ */
/* Monte Carlo experiments                                             */

typedef struct ftn_experiment ftn_experiment;

/* Parse a flat key = value config (see README for the key list).
 * Unknown keys are errors. */
ftn_status ftn_experiment_parse(const char* text, ftn_experiment** out);
ftn_status ftn_experiment_parse_file(const char* path, ftn_experiment** out);
/* Apply one key = value assignment on top of the parsed config. */
ftn_status ftn_experiment_set(ftn_experiment* experiment, const char* key, const char* value);
void ftn_experiment_free(ftn_experiment* experiment);

typedef struct ftn_sweep ftn_sweep;

typedef struct ftn_ber_point {
  char detector[16];
  double beta;
  double tau;
  double ebno_db;
  long long bits;
  long long errors;
  double ber;
  double mean_nodes;
  double ms_per_block;
} ftn_ber_point;

/* BER sweep over the config grid (stops per point at min_error_events or
 * max_bits). Deterministic for a fixed config and seed. */
ftn_status ftn_run_ber_sweep(const ftn_experiment* experiment, ftn_sweep** out);
/* Fixed blocks per point; for node-count and timing comparisons. */
ftn_status ftn_run_bench(const ftn_experiment* experiment, int blocks_per_point, ftn_sweep** out);
void ftn_sweep_free(ftn_sweep* sweep);

int ftn_sweep_row_count(const ftn_sweep* sweep);
ftn_status ftn_sweep_row(const ftn_sweep* sweep, int index, ftn_ber_point* out);
int ftn_sweep_failure_count(const ftn_sweep* sweep);
const char* ftn_sweep_failure(const ftn_sweep* sweep, int index);
ftn_status ftn_sweep_write_csv(const ftn_sweep* sweep, const char* path);
ftn_status ftn_sweep_write_svg(const ftn_sweep* sweep, const char* path);

/* ------------------------------------------------------------------ */
/* Spectral efficiency at a target BER                                 */

typedef struct ftn_se_point {
  double beta;
  double tau;        /* smallest tau meeting the target */
  double se_ftn;
  double se_nyquist;
  double ratio;
} ftn_se_point;

/* Smallest tau on the grid {0.50 .. 1.00, step 0.01} whose measured BER
 * meets target_ber at the given Eb/N0 (budgets come from the config). */
ftn_status ftn_find_min_tau(const ftn_experiment* experiment, double beta, double target_ber,
                            double ebno_db, const char* detector, double* tau_out);

/* One ftn_se_point per beta, written into rows (caller buffer). */
ftn_status ftn_run_se_curve(const ftn_experiment* experiment, const double* betas, int n_betas,
                            double target_ber, double ebno_db, const char* detector,
                            ftn_se_point* rows);

ftn_status ftn_se_write_csv(const ftn_se_point* rows, int n_rows, const char* path);
ftn_status ftn_se_write_svg(const ftn_se_point* rows, int n_rows, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FTN_FTN_H */

#ifndef FTN_CHANNEL_SIM_HPP
#define FTN_CHANNEL_SIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pulse_model.hpp"
#include "rng.hpp"

namespace ftn {

/// Block of BPSK symbols, every entry in {-1, +1}.
struct SymbolBlock {
  std::vector<double> symbols;
  int size() const { return static_cast<int>(symbols.size()); }
};

/// Map bits to symbols: 0 -> +1, 1 -> -1.
SymbolBlock modulate(std::span<const int> bits);
std::vector<int> demodulate(const SymbolBlock& a);

struct ChannelConfig {
  double symbol_energy = 1.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  const GramMatrix* gram = nullptr;  // non-owning
};

/// Matched-filter samples y and the whitened (zero-forcing domain) samples
/// z = G^{-1} y.
struct ReceivedBlock {
  std::vector<double> y;
  std::vector<double> z;
};

/// Colored Gaussian noise with covariance sigma^2 G, synthesized exactly
/// through the Cholesky factor: w = sigma * Rᵀ v with v i.i.d. standard
/// normal.
std::vector<double> sample_colored_noise(const BandedUpperTriangular& r, double sigma, Rng& rng);

/// y = sqrt(Es) G a + w and z = G^{-1} y. The overload without a factor
/// computes the Cholesky factorization internally and draws its noise from a
/// generator seeded by cfg.seed (bit-identical across calls).
ReceivedBlock transmit(const SymbolBlock& a, const ChannelConfig& cfg);
ReceivedBlock transmit(const SymbolBlock& a, const ChannelConfig& cfg,
                       const BandedUpperTriangular& r, Rng& rng);

/// Eb/N0 (dB) to noise level: Eb = Es / bits_per_symbol, N0 = Eb * 10^(-x/10),
/// sigma = sqrt(N0 / 2). Under this convention the tau = 1 system reproduces
/// the textbook BPSK curve Q(sqrt(2 Eb/N0)).
double ebno_to_sigma(double ebno_db, double symbol_energy, int bits_per_symbol);

/// A ready-to-run FTN system: pulse, effective ISI band, Gram matrix and its
/// Cholesky factor. The band starts at the truncation-threshold length and is
/// extended with exact autocorrelation taps until the banded Cholesky
/// succeeds (truncation can break positive definiteness; the exact Gram of
/// independent pulse shifts cannot).
struct FtnSystem {
  PulseSpec pulse;
  IsiBand band;            // effective band (matrix bandwidth = length - 1)
  GramMatrix gram;
  BandedUpperTriangular chol;
  int threshold_band_length = 0;  // length the threshold rule alone produced
  int dim() const { return gram.dim(); }
};

FtnSystem make_ftn_system(double beta, double tau, int n, double threshold,
                          int band_cap = 64, double pivot_floor = 1e-12);

}  // namespace ftn

#endif

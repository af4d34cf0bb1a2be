#include "channel_sim.hpp"

#include <algorithm>
#include <cmath>

namespace ftn {

SymbolBlock modulate(std::span<const int> bits) {
  if (bits.empty()) throw Error("modulate: empty bit vector");
  SymbolBlock a;
  a.symbols.resize(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) a.symbols[i] = 1.0 - 2.0 * bits[i];
  return a;
}

std::vector<int> demodulate(const SymbolBlock& a) {
  std::vector<int> bits(a.symbols.size());
  for (size_t i = 0; i < a.symbols.size(); ++i) bits[i] = a.symbols[i] < 0.0 ? 1 : 0;
  return bits;
}

std::vector<double> sample_colored_noise(const BandedUpperTriangular& r, double sigma, Rng& rng) {
  const int n = r.dim();
  std::vector<double> v(n);
  for (double& vi : v) vi = rng.normal();
  if (sigma == 0.0) return std::vector<double>(n, 0.0);
  std::vector<double> w = r.multiply_transposed(v);
  for (double& wi : w) wi *= sigma;
  return w;
}

ReceivedBlock transmit(const SymbolBlock& a, const ChannelConfig& cfg,
                       const BandedUpperTriangular& r, Rng& rng) {
  if (cfg.gram == nullptr) throw Error("transmit: ChannelConfig has no Gram matrix");
  const GramMatrix& g = *cfg.gram;
  if (a.size() != g.dim()) throw Error("transmit: block size does not match Gram dimension");

  const double amp = std::sqrt(cfg.symbol_energy);
  std::vector<double> scaled(a.symbols);
  for (double& s : scaled) s *= amp;

  ReceivedBlock block;
  block.y = g.matrix.multiply(scaled);
  const std::vector<double> w = sample_colored_noise(r, cfg.sigma, rng);
  for (int i = 0; i < g.dim(); ++i) block.y[i] += w[i];
  block.z = solve_with_factor(g.matrix, r, block.y);
  return block;
}

ReceivedBlock transmit(const SymbolBlock& a, const ChannelConfig& cfg) {
  if (cfg.gram == nullptr) throw Error("transmit: ChannelConfig has no Gram matrix");
  const BandedUpperTriangular r = cholesky_banded(cfg.gram->matrix);
  Rng rng(cfg.seed);
  return transmit(a, cfg, r, rng);
}

double ebno_to_sigma(double ebno_db, double symbol_energy, int bits_per_symbol) {
  if (bits_per_symbol < 1) throw Error("ebno_to_sigma: bits_per_symbol must be >= 1");
  const double eb = symbol_energy / bits_per_symbol;
  const double n0 = eb * std::pow(10.0, -ebno_db / 10.0);
  return std::sqrt(n0 / 2.0);
}

FtnSystem make_ftn_system(double beta, double tau, int n, double threshold, int band_cap,
                          double pivot_floor) {
  PulseSpec pulse{beta, 1.0};
  IsiBand band = make_isi_band(pulse, tau, threshold, band_cap);
  const int threshold_length = band.length();

  // Truncation can make the Toeplitz Gram indefinite even though the exact
  // Gram of pulse shifts is always PD. Extend the band with exact taps until
  // the factorization succeeds; at length n the matrix is the exact Gram.
  for (;;) {
    try {
      GramMatrix gram = build_gram(band, n, pivot_floor);
      BandedUpperTriangular chol = cholesky_banded(gram.matrix, pivot_floor);
      return FtnSystem{pulse, band, std::move(gram), std::move(chol), threshold_length};
    } catch (const NotPositiveDefinite&) {
      if (band.length() >= n) throw;
      band = extend_band(pulse, band, std::min(n, band.length() + 4));
    }
  }
}

}  // namespace ftn

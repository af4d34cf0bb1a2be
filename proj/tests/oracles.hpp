// Test-side reference computations, kept independent of the library paths
// they are used to check.
#ifndef FTN_TESTS_ORACLES_HPP
#define FTN_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "banded_linalg.hpp"
#include "channel_sim.hpp"
#include "pulse_model.hpp"

namespace oracles {

/// Composite trapezoidal rule on [a, b] with the given step.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, double step) {
  const long n = std::lround((b - a) / step);
  double s = 0.5 * (f(a) + f(b));
  for (long i = 1; i < n; ++i) s += f(a + i * step);
  return s * step;
}

/// Numerically integrated pulse autocorrelation over [-40T, 40T], step T/1000.
inline double integrated_autocorrelation(double t, const ftn::PulseSpec& spec) {
  const double T = spec.symbol_time;
  return trapezoid([&](double x) { return ftn::rrc_value(x, spec) * ftn::rrc_value(x - t, spec); },
                   -40.0 * T, 40.0 * T, T / 1000.0);
}

/// Plain dense Cholesky (upper factor), no banding.
inline ftn::DenseMatrix dense_cholesky(const ftn::DenseMatrix& g) {
  const int n = g.rows();
  ftn::DenseMatrix r(n, n);
  for (int i = 0; i < n; ++i) {
    double d = g(i, i);
    for (int k = 0; k < i; ++k) d -= r(k, i) * r(k, i);
    r(i, i) = std::sqrt(d);
    for (int j = i + 1; j < n; ++j) {
      double s = g(i, j);
      for (int k = 0; k < i; ++k) s -= r(k, i) * r(k, j);
      r(i, j) = s / r(i, i);
    }
  }
  return r;
}

/// Random banded SPD matrix, built as RᵀR from a random banded upper factor
/// with a dominant diagonal.
inline ftn::BandedSymMatrix random_spd_banded(int n, int b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> off(-0.4, 0.4);
  std::uniform_real_distribution<double> diag(0.8, 1.6);
  ftn::BandedUpperTriangular r(n, b);
  for (int i = 0; i < n; ++i) {
    r.at(i, i) = diag(rng);
    for (int j = i + 1; j <= std::min(n - 1, i + b); ++j) r.at(i, j) = off(rng);
  }
  ftn::BandedSymMatrix g(n, b);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j <= std::min(n - 1, i + b); ++j) {
      double s = 0.0;
      for (int k = std::max(0, j - b); k <= i; ++k) s += r(k, i) * r(k, j);
      g.set(i, j, s);
    }
  }
  return g;
}

inline double max_abs_diff(const ftn::DenseMatrix& a, const ftn::DenseMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double rel_frobenius_error(const ftn::DenseMatrix& approx, const ftn::DenseMatrix& exact) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < exact.rows(); ++i)
    for (int j = 0; j < exact.cols(); ++j) {
      const double d = approx(i, j) - exact(i, j);
      num += d * d;
      den += exact(i, j) * exact(i, j);
    }
  return std::sqrt(num / den);
}

/// One seeded noisy block through the channel.
inline ftn::ReceivedBlock seeded_block(const ftn::FtnSystem& sys, double sigma,
                                       std::uint64_t seed, ftn::SymbolBlock* tx = nullptr) {
  ftn::Rng rng(seed);
  std::vector<int> bits(static_cast<size_t>(sys.dim()));
  for (int& b : bits) b = rng.bit();
  const ftn::SymbolBlock a = ftn::modulate(bits);
  if (tx != nullptr) *tx = a;
  ftn::ChannelConfig cfg;
  cfg.sigma = sigma;
  cfg.gram = &sys.gram;
  return ftn::transmit(a, cfg, sys.chol, rng);
}

}  // namespace oracles

#endif

#include "pulse_model.hpp"

#include <algorithm>
#include <cmath>

namespace ftn {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSingularityGuard = 1e-8;  // in units of t/T

double sinc(double x) {
  const double px = kPi * x;
  if (std::abs(px) < 1e-6) return 1.0 - px * px / 6.0;
  return std::sin(px) / px;
}

}  // namespace

void PulseSpec::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error("PulseSpec: beta must lie in [0, 1]");
  if (!(symbol_time > 0.0)) throw Error("PulseSpec: symbol_time must be positive");
}

double rrc_value(double t, const PulseSpec& spec) {
  spec.validate();
  const double T = spec.symbol_time;
  const double beta = spec.beta;
  const double x = t / T;
  const double ax = std::abs(x);
  const double root_t = std::sqrt(T);

  if (beta == 0.0) return sinc(x) / root_t;
  if (ax < kSingularityGuard) return (1.0 - beta + 4.0 * beta / kPi) / root_t;
  if (std::abs(ax - 1.0 / (4.0 * beta)) < kSingularityGuard) {
    const double a = kPi / (4.0 * beta);
    return beta / (root_t * std::sqrt(2.0)) *
           ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
  }
  const double num = std::sin(kPi * x * (1.0 - beta)) + 4.0 * beta * x * std::cos(kPi * x * (1.0 + beta));
  const double den = kPi * x * (1.0 - 16.0 * beta * beta * x * x);
  return num / (den * root_t);
}

double autocorrelation_value(double t, const PulseSpec& spec) {
  spec.validate();
  const double beta = spec.beta;
  const double x = t / spec.symbol_time;
  const double ax = std::abs(x);

  if (beta == 0.0) return sinc(x);
  if (std::abs(ax - 1.0 / (2.0 * beta)) < kSingularityGuard)
    return 0.5 * beta * std::sin(kPi / (2.0 * beta));
  return sinc(x) * std::cos(kPi * beta * x) / (1.0 - 4.0 * beta * beta * x * x);
}

IsiBand make_isi_band(const PulseSpec& spec, double tau, double threshold, int max_length) {
  spec.validate();
  if (!(tau > 0.0 && tau <= 1.0)) throw Error("make_isi_band: tau must lie in (0, 1]");
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error("make_isi_band: threshold must lie in (0, 1)");

  // scan well past the cap so "for all k >= L" is established over the
  // horizon where the autocorrelation envelope can still exceed practical
  // thresholds (the beta = 0 tail decays only like 1/k)
  const int horizon = std::max(4096, 4 * max_length);
  int last_offender = 0;
  for (int k = 1; k <= horizon; ++k) {
    if (std::abs(autocorrelation_value(k * tau * spec.symbol_time, spec)) >= threshold)
      last_offender = k;
  }
  const int length = last_offender + 1;
  if (length > max_length) throw BandTooLong(length, max_length);

  IsiBand band;
  band.tau = tau;
  band.taps.resize(length);
  for (int k = 0; k < length; ++k)
    band.taps[k] = autocorrelation_value(k * tau * spec.symbol_time, spec);
  return band;
}

IsiBand extend_band(const PulseSpec& spec, const IsiBand& band, int new_length) {
  if (new_length <= band.length()) return band;
  IsiBand out = band;
  out.taps.resize(new_length);
  for (int k = band.length(); k < new_length; ++k)
    out.taps[k] = autocorrelation_value(k * band.tau * spec.symbol_time, spec);
  return out;
}

GramMatrix build_gram(const IsiBand& band, int n, double pivot_floor) {
  if (n < 1) throw Error("build_gram: n must be positive");
  const int b = std::min(band.length() - 1, n - 1);
  BandedSymMatrix g(n, b);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d <= b && i + d < n; ++d) g.set(i, i + d, band.taps[d]);
  cholesky_banded(g, pivot_floor);  // positive definiteness check
  return GramMatrix{std::move(g), band};
}

}  // namespace ftn

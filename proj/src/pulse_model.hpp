#ifndef FTN_PULSE_MODEL_HPP
#define FTN_PULSE_MODEL_HPP

#include <vector>

#include "banded_linalg.hpp"

namespace ftn {

/// Root-raised-cosine pulse parameters. All quantities depend only on t/T,
/// so symbol_time defaults to 1 and mostly stays there.
struct PulseSpec {
  double beta = 0.3;
  double symbol_time = 1.0;
  void validate() const;
};

/// Unit-energy root-raised-cosine amplitude at time t. Removable
/// singularities (t = 0 and |t| = T/(4*beta)) evaluate to their limits; a
/// guard window of 1e-8*T is applied around each.
double rrc_value(double t, const PulseSpec& spec);

/// Pulse autocorrelation g(t) = integral of p(x) p(x - t) dx, in closed form
/// (the raised-cosine time response). g(0) = 1 and g(kT) = 0 for integer
/// k != 0. The removable singularity at |t| = T/(2*beta) evaluates to
/// (beta/2) sin(pi/(2*beta)).
double autocorrelation_value(double t, const PulseSpec& spec);

/// Truncated ISI autocorrelation band: taps[k] = g(k*tau*T).
struct IsiBand {
  double tau = 1.0;
  std::vector<double> taps;  // taps[0] = 1
  int length() const { return static_cast<int>(taps.size()); }
};

/// Build the band with the smallest length L such that |g(k*tau*T)| stays
/// below threshold for every k >= L. Throws BandTooLong when L would exceed
/// max_length.
IsiBand make_isi_band(const PulseSpec& spec, double tau, double threshold, int max_length = 64);

/// Extend a band to new_length by appending exact autocorrelation taps.
/// Used when the truncated Gram matrix loses positive definiteness.
IsiBand extend_band(const PulseSpec& spec, const IsiBand& band, int new_length);

/// The banded symmetric Toeplitz ISI matrix with unit diagonal.
struct GramMatrix {
  BandedSymMatrix matrix;
  IsiBand band;
  int dim() const { return matrix.dim(); }
};

/// Assemble the n x n Gram matrix from the band and verify positive
/// definiteness by attempting a banded Cholesky factorization (the attempt's
/// NotPositiveDefinite propagates; callers may retry with a longer band).
GramMatrix build_gram(const IsiBand& band, int n, double pivot_floor = 1e-12);

}  // namespace ftn

#endif

#ifndef FTN_DETECTORS_HPP
#define FTN_DETECTORS_HPP

#include <limits>
#include <span>
#include <vector>

#include "channel_sim.hpp"

namespace ftn {

struct DetectorOutput {
  SymbolBlock decision;
  double metric = 0.0;          // (z - a)ᵀ G (z - a) of the decision
  long long nodes_visited = 0;
  long long radius_updates = 0;
  int max_update_terms = 0;     // widest partial-metric update (multiply-adds)
  double sdr_lower_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Optional instrumentation sink for the tree searches (test hook).
struct SearchTrace {
  std::vector<double>* radii = nullptr;  // squared radius after each update
};

/// MLSE objective (z - a)ᵀ G (z - a), evaluated through the band.
double mlse_metric(std::span<const double> z, const GramMatrix& g, const SymbolBlock& a);

/// ||R (z - a)||², the whitened form of the same objective.
double whitened_metric(std::span<const double> z, const BandedUpperTriangular& r,
                       const SymbolBlock& a);

/// Sign detector on the zero-forcing samples; ties at exactly 0 go to +1.
DetectorOutput zf_detect(const ReceivedBlock& block, const GramMatrix& g);

/// Exhaustive MLSE over all 2^N vectors; the reference oracle. Ties break to
/// the lexicographically smallest vector under -1 < +1. Guarded to N <= 24.
/// unique_minimizer (optional) reports whether the optimum was unique up to
/// 1e-12.
DetectorOutput mlse_brute(const ReceivedBlock& block, const GramMatrix& g,
                          bool* unique_minimizer = nullptr);

/// Standard sphere decoder on the white-noise model: QR of G, then a
/// depth-first search of ||Q̄ᵀy - R̄ a||² with the binary alphabet intersected
/// with the per-level interval. It optimizes the wrong (unwhitened) metric
/// for FTN; the reported metric is nevertheless the MLSE metric of its
/// decision so detectors compare apples-to-apples.
DetectorOutput standard_sd_detect(const ReceivedBlock& block, const GramMatrix& g,
                                  const SearchTrace& trace = {});

enum class SdseRadius {
  kFullZfResidual,  // d² = ||R(z - a_ZF)||², guarantees a non-empty sphere
  kLevelNOnly       // the literal level-N-term seed; may exhaust without a leaf
};

/// Whitened banded sphere-decoder sequence estimator. Depth-first search of
/// sum_i (sum_{j=i..min(i+L-1,N)} R_{i,j} (z_j - a_j))² over {-1,+1}^N with
/// Schnorr-Euchner ordering of the two candidates per level; every partial
/// update touches at most L = band length terms. Returns the exact MLSE
/// minimizer.
DetectorOutput sdse_detect(const ReceivedBlock& block, const BandedUpperTriangular& r,
                           const IsiBand& band, SdseRadius radius_mode = SdseRadius::kFullZfResidual,
                           const SearchTrace& trace = {});

}  // namespace ftn

#endif

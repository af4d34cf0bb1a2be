#ifndef FTN_SDR_RELAX_HPP
#define FTN_SDR_RELAX_HPP

#include <cstdint>

#include "detectors.hpp"

namespace ftn {

/// Lifted cost matrix C for the boolean quadratic program
/// min aᵀGa - 2yᵀa: top-left block G, last column/row -y, corner 0, so that
/// Tr(C [[aaᵀ, a], [aᵀ, 1]]) equals the BQP objective for every binary a.
struct LiftedProblem {
  int n = 0;
  DenseMatrix c;  // (n+1) x (n+1), symmetric
};

LiftedProblem lift_problem(const GramMatrix& g, std::span<const double> y);

struct SdrOptions {
  double tol = 1e-7;      // per-sweep relative objective decrease to stop
  int max_sweeps = 5000;
  int restarts = 1;
  std::uint64_t init_seed = 0x5eedf00dULL;
};

struct SdrSolution {
  DenseMatrix a_lifted;           // A*, n x n
  std::vector<double> a_relaxed;  // a*
  double objective = 0.0;         // Tr(G A*) + 2 ŷᵀ a* (primal value)
  double lower_bound = 0.0;       // certified dual bound, <= the BQP optimum
  int sweeps = 0;
  double diag_residual = 0.0;     // max |diag(A*) - 1|
  double min_eigenvalue = 0.0;    // of [[A*, a*], [a*ᵀ, 1]]
};

/// Diagonal-constrained SDP solver: low-rank factorization B = V Vᵀ with
/// unit-norm rows and rank ceil(sqrt(2(n+1))), minimized by cyclic row
/// updates. The reported lower_bound is certified through the dual
/// (mu_i = C_ii - ||sum_j C_ij v_j||; bound = sum mu + (n+1) min(0,
/// lambda_min(C - Diag(mu)))), so it never exceeds the true SDP value even
/// when the sweeps stop early. Throws NotConverged past max_sweeps.
SdrSolution solve_sdr(const LiftedProblem& p, const SdrOptions& opts = {});
SdrSolution solve_sdr(const LiftedProblem& p, double tol, int max_sweeps);

struct RandomizationConfig {
  int draws = 100;  // Q
  std::uint64_t seed = 0;
};

/// Gaussian randomization: sample xi_q ~ N(a*, A* - a* a*ᵀ) for q = 1..Q
/// (PSD square root via symmetric eigendecomposition, negative eigenvalues
/// clamped to zero), quantize by sign, keep the draw with the smallest BQP
/// objective. Draw q depends only on (seed, q), so enlarging Q refines a
/// nested sample set.
DetectorOutput randomize(const SdrSolution& sol, const RandomizationConfig& cfg,
                         const GramMatrix& g, std::span<const double> y);

/// End-to-end semidefinite-relaxation sequence estimator:
/// lift -> solve -> randomize.
DetectorOutput sdrse_detect(const ReceivedBlock& block, const GramMatrix& g,
                            const RandomizationConfig& cfg, const SdrOptions& opts = {});

/// Cyclic Jacobi eigendecomposition of a symmetric matrix: m = V diag(w) Vᵀ
/// with orthonormal columns in V. Exposed for tests.
void sym_eig(const DenseMatrix& m, DenseMatrix& vectors, std::vector<double>& values);

}  // namespace ftn

#endif

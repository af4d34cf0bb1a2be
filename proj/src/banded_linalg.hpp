#ifndef FTN_BANDED_LINALG_HPP
#define FTN_BANDED_LINALG_HPP

#include <span>
#include <vector>

#include "errors.hpp"

namespace ftn {

/// Small dense row-major matrix. Used for the QR path of the standard sphere
/// decoder, the lifted SDR cost matrix, and test-side reconstructions.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}
  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<double> multiply_transposed(std::span<const double> x) const;  // Aᵀ x
  double frobenius_norm() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// Symmetric banded matrix; only the upper band is stored (row-major), so
/// symmetry holds structurally and entries with |i-j| > b are zero.
class BandedSymMatrix {
 public:
  BandedSymMatrix() = default;
  BandedSymMatrix(int n, int half_bandwidth);
  int dim() const { return n_; }
  int half_bandwidth() const { return b_; }
  double operator()(int i, int j) const {
    const int d = j >= i ? j - i : i - j;
    if (d > b_) return 0.0;
    const int row = j >= i ? i : j;
    return band_[static_cast<size_t>(row) * (b_ + 1) + d];
  }
  /// Assign entry (i, j) and, structurally, (j, i). Requires |i-j| <= b.
  void set(int i, int j, double v);
  std::vector<double> multiply(std::span<const double> x) const;
  DenseMatrix to_dense() const;

 private:
  int n_ = 0, b_ = 0;
  std::vector<double> band_;
};

/// Upper-triangular banded matrix (Cholesky factor convention: positive
/// diagonal). entry(i, j) = 0 for j < i or j > i + b.
class BandedUpperTriangular {
 public:
  BandedUpperTriangular() = default;
  BandedUpperTriangular(int n, int half_bandwidth);
  int dim() const { return n_; }
  int half_bandwidth() const { return b_; }
  double operator()(int i, int j) const {
    if (j < i || j > i + b_ || j >= n_) return 0.0;
    return band_[static_cast<size_t>(i) * (b_ + 1) + (j - i)];
  }
  double& at(int i, int j) { return band_[static_cast<size_t>(i) * (b_ + 1) + (j - i)]; }
  std::vector<double> multiply(std::span<const double> x) const;             // R x
  std::vector<double> multiply_transposed(std::span<const double> x) const;  // Rᵀ x
  DenseMatrix to_dense() const;

 private:
  int n_ = 0, b_ = 0;
  std::vector<double> band_;
};


struct OrthogonalFactorPair {
  DenseMatrix q;
  DenseMatrix r;
};

/// Banded Cholesky G = RᵀR. The factor keeps G's half-bandwidth exactly.
/// Throws NotPositiveDefinite when a pivot falls at or below pivot_floor.
/// diag_load is added to the diagonal before factoring (default off).
BandedUpperTriangular cholesky_banded(const BandedSymMatrix& g, double pivot_floor = 1e-12,
                                      double diag_load = 0.0);

/// Solve R x = rhs (banded or dense upper-triangular back substitution).
std::vector<double> back_substitute(const BandedUpperTriangular& r, std::span<const double> rhs);
std::vector<double> back_substitute(const DenseMatrix& r, std::span<const double> rhs);

/// Solve Rᵀ u = rhs by forward substitution on the stored upper factor.
std::vector<double> forward_substitute_transposed(const BandedUpperTriangular& r,
                                                  std::span<const double> rhs);

/// Solve g x = y through an existing Cholesky factor, with one step of
/// iterative refinement (the FTN Gram matrices can be ill-conditioned).
std::vector<double> solve_with_factor(const BandedSymMatrix& g, const BandedUpperTriangular& r,
                                      std::span<const double> y);

/// Solve g x = y; factors internally via cholesky_banded.
std::vector<double> solve_spd(const BandedSymMatrix& g, std::span<const double> y);

/// Householder QR of a square matrix, with R's diagonal forced non-negative
/// so the factorization is deterministic. Throws RankDeficient when a
/// diagonal of R falls below 1e-12 * ||g||_F.
OrthogonalFactorPair qr_factor(const DenseMatrix& g);

}  // namespace ftn

#endif

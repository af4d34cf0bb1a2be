#include "banded_linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ftn {

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

std::vector<double> DenseMatrix::multiply_transposed(std::span<const double> x) const {
  std::vector<double> out(cols_, 0.0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[j] += (*this)(i, j) * x[i];
  return out;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

BandedSymMatrix::BandedSymMatrix(int n, int half_bandwidth)
    : n_(n), b_(half_bandwidth), band_(static_cast<size_t>(n) * (half_bandwidth + 1), 0.0) {}

void BandedSymMatrix::set(int i, int j, double v) {
  const int d = j >= i ? j - i : i - j;
  if (d > b_) throw Error("BandedSymMatrix::set outside band");
  const int row = j >= i ? i : j;
  band_[static_cast<size_t>(row) * (b_ + 1) + d] = v;
}

std::vector<double> BandedSymMatrix::multiply(std::span<const double> x) const {
  std::vector<double> out(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = (*this)(i, i) * x[i];
    const int hi = std::min(n_ - 1, i + b_);
    for (int j = i + 1; j <= hi; ++j) {
      const double g = (*this)(i, j);
      s += g * x[j];
      out[j] += g * x[i];
    }
    out[i] += s;
  }
  return out;
}

DenseMatrix BandedSymMatrix::to_dense() const {
  DenseMatrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

BandedUpperTriangular::BandedUpperTriangular(int n, int half_bandwidth)
    : n_(n), b_(half_bandwidth), band_(static_cast<size_t>(n) * (half_bandwidth + 1), 0.0) {}

std::vector<double> BandedUpperTriangular::multiply(std::span<const double> x) const {
  std::vector<double> out(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    const int hi = std::min(n_ - 1, i + b_);
    for (int j = i; j <= hi; ++j) s += (*this)(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

std::vector<double> BandedUpperTriangular::multiply_transposed(std::span<const double> x) const {
  std::vector<double> out(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const int hi = std::min(n_ - 1, i + b_);
    for (int j = i; j <= hi; ++j) out[j] += (*this)(i, j) * x[i];
  }
  return out;
}

DenseMatrix BandedUpperTriangular::to_dense() const {
  DenseMatrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j <= std::min(n_ - 1, i + b_); ++j) m(i, j) = (*this)(i, j);
  return m;
}

BandedUpperTriangular cholesky_banded(const BandedSymMatrix& g, double pivot_floor,
                                      double diag_load) {
  const int n = g.dim();
  const int b = g.half_bandwidth();
  BandedUpperTriangular r(n, b);
  for (int i = 0; i < n; ++i) {
    double d = g(i, i) + diag_load;
    const int lo = std::max(0, i - b);
    for (int k = lo; k < i; ++k) {
      const double rki = r(k, i);
      d -= rki * rki;
    }
    if (d <= pivot_floor) throw NotPositiveDefinite(i, d);
    const double rii = std::sqrt(d);
    r.at(i, i) = rii;
    const int hi = std::min(n - 1, i + b);
    for (int j = i + 1; j <= hi; ++j) {
      double s = g(i, j);
      // r(k,i) and r(k,j) overlap only for k >= j - b
      for (int k = std::max(0, j - b); k < i; ++k) s -= r(k, i) * r(k, j);
      r.at(i, j) = s / rii;
    }
  }
  return r;
}

std::vector<double> back_substitute(const BandedUpperTriangular& r, std::span<const double> rhs) {
  const int n = r.dim();
  const int b = r.half_bandwidth();
  std::vector<double> x(rhs.begin(), rhs.end());
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    const int hi = std::min(n - 1, i + b);
    for (int j = i + 1; j <= hi; ++j) s -= r(i, j) * x[j];
    const double d = r(i, i);
    if (std::abs(d) < 1e-14) throw SingularDiagonal(i, d);
    x[i] = s / d;
  }
  return x;
}

std::vector<double> back_substitute(const DenseMatrix& r, std::span<const double> rhs) {
  const int n = r.rows();
  std::vector<double> x(rhs.begin(), rhs.end());
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= r(i, j) * x[j];
    const double d = r(i, i);
    if (std::abs(d) < 1e-14) throw SingularDiagonal(i, d);
    x[i] = s / d;
  }
  return x;
}

std::vector<double> forward_substitute_transposed(const BandedUpperTriangular& r,
                                                  std::span<const double> rhs) {
  const int n = r.dim();
  const int b = r.half_bandwidth();
  std::vector<double> u(rhs.begin(), rhs.end());
  for (int i = 0; i < n; ++i) {
    double s = u[i];
    for (int k = std::max(0, i - b); k < i; ++k) s -= r(k, i) * u[k];
    const double d = r(i, i);
    if (std::abs(d) < 1e-14) throw SingularDiagonal(i, d);
    u[i] = s / d;
  }
  return u;
}

std::vector<double> solve_with_factor(const BandedSymMatrix& g, const BandedUpperTriangular& r,
                                      std::span<const double> y) {
  std::vector<double> x = back_substitute(r, forward_substitute_transposed(r, y));
  // one refinement step; keeps residuals near machine level for the
  // ill-conditioned Gram matrices that show up at small tau
  std::vector<double> gx = g.multiply(x);
  std::vector<double> res(g.dim());
  for (int i = 0; i < g.dim(); ++i) res[i] = y[i] - gx[i];
  std::vector<double> dx = back_substitute(r, forward_substitute_transposed(r, res));
  for (int i = 0; i < g.dim(); ++i) x[i] += dx[i];
  return x;
}

std::vector<double> solve_spd(const BandedSymMatrix& g, std::span<const double> y) {
  const BandedUpperTriangular r = cholesky_banded(g);
  return solve_with_factor(g, r, y);
}

OrthogonalFactorPair qr_factor(const DenseMatrix& g) {
  const int n = g.rows();
  if (n != g.cols()) throw Error("qr_factor: matrix must be square");
  DenseMatrix r = g;
  DenseMatrix q = DenseMatrix::identity(n);
  const double scale = g.frobenius_norm();
  std::vector<double> v(n);

  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    for (int i = k; i < n; ++i) norm += r(i, k) * r(i, k);
    norm = std::sqrt(norm);
    if (norm < 1e-12 * scale) throw RankDeficient(k);

    const double alpha = r(k, k) >= 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (int i = k; i < n; ++i) {
      v[i] = r(i, k) - (i == k ? alpha : 0.0);
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 > 0.0) {
      // apply H = I - 2 v vᵀ / (vᵀv) to R (left) and accumulate into Q
      for (int j = k; j < n; ++j) {
        double s = 0.0;
        for (int i = k; i < n; ++i) s += v[i] * r(i, j);
        s = 2.0 * s / vnorm2;
        for (int i = k; i < n; ++i) r(i, j) -= s * v[i];
      }
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = k; i < n; ++i) s += v[i] * q(j, i);
        s = 2.0 * s / vnorm2;
        for (int i = k; i < n; ++i) q(j, i) -= s * v[i];
      }
    }
    r(k, k) = alpha;
    for (int i = k + 1; i < n; ++i) r(i, k) = 0.0;
  }

  // fix the sign convention: non-negative diagonal of R
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) {
      for (int j = i; j < n; ++j) r(i, j) = -r(i, j);
      for (int j = 0; j < n; ++j) q(j, i) = -q(j, i);
    }
    if (r(i, i) < 1e-12 * scale) throw RankDeficient(i);
  }
  return {std::move(q), std::move(r)};
}

}  // namespace ftn

#include "detectors.hpp"

#include <algorithm>
#include <cmath>

namespace ftn {

namespace {

SymbolBlock zf_decision(std::span<const double> z) {
  SymbolBlock a;
  a.symbols.resize(z.size());
  for (size_t i = 0; i < z.size(); ++i) a.symbols[i] = z[i] >= 0.0 ? 1.0 : -1.0;
  return a;
}

}  // namespace

double mlse_metric(std::span<const double> z, const GramMatrix& g, const SymbolBlock& a) {
  const int n = g.dim();
  const int b = g.matrix.half_bandwidth();
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ri = z[i] - a.symbols[i];
    double s = g.matrix(i, i) * ri;
    const int hi = std::min(n - 1, i + b);
    for (int j = i + 1; j <= hi; ++j) s += 2.0 * g.matrix(i, j) * (z[j] - a.symbols[j]);
    m += ri * s;
  }
  return m;
}

double whitened_metric(std::span<const double> z, const BandedUpperTriangular& r,
                       const SymbolBlock& a) {
  const int n = r.dim();
  const int b = r.half_bandwidth();
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const int hi = std::min(n - 1, i + b);
    for (int j = i; j <= hi; ++j) s += r(i, j) * (z[j] - a.symbols[j]);
    m += s * s;
  }
  return m;
}

DetectorOutput zf_detect(const ReceivedBlock& block, const GramMatrix& g) {
  DetectorOutput out;
  out.decision = zf_decision(block.z);
  out.metric = mlse_metric(block.z, g, out.decision);
  return out;
}

DetectorOutput mlse_brute(const ReceivedBlock& block, const GramMatrix& g,
                          bool* unique_minimizer) {
  constexpr int kLimit = 24;
  const int n = g.dim();
  if (n > kLimit) throw BlockTooLarge(n, kLimit);

  DetectorOutput out;
  SymbolBlock a;
  a.symbols.resize(n);
  double best = std::numeric_limits<double>::infinity();
  int best_count = 1;
  // lexicographic enumeration with -1 < +1 and a_1 most significant, so the
  // strict-< update keeps the lexicographically smallest tie
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t m = 0; m < total; ++m) {
    for (int i = 0; i < n; ++i) a.symbols[i] = ((m >> (n - 1 - i)) & 1u) ? 1.0 : -1.0;
    const double v = mlse_metric(block.z, g, a);
    if (v < best) {
      if (best - v <= 1e-12 * (1.0 + std::abs(v)))
        ++best_count;
      else
        best_count = 1;
      best = v;
      out.decision = a;
      ++out.radius_updates;
    } else if (v - best <= 1e-12 * (1.0 + std::abs(v))) {
      ++best_count;
    }
    ++out.nodes_visited;
  }
  out.metric = best;
  if (unique_minimizer != nullptr) *unique_minimizer = best_count == 1;
  return out;
}

DetectorOutput standard_sd_detect(const ReceivedBlock& block, const GramMatrix& g,
                                  const SearchTrace& trace) {
  const int n = g.dim();
  const OrthogonalFactorPair qr = qr_factor(g.matrix.to_dense());
  const std::vector<double> zbar = qr.q.multiply_transposed(block.y);

  const SymbolBlock a_zf = zf_decision(block.z);
  // initial radius: distance between y and the zero-forcing lattice point
  const std::vector<double> g_azf = g.matrix.multiply(a_zf.symbols);
  double d2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = block.y[i] - g_azf[i];
    d2 += r * r;
  }

  DetectorOutput out;
  out.decision = a_zf;

  std::vector<double> dist(n + 1, 0.0);
  std::vector<double> c(n, 0.0);
  std::vector<double> cand0(n), cand1(n);
  std::vector<int> next(n, 0);
  std::vector<double> a(n, 0.0);
  bool found = false;
  SymbolBlock best = a_zf;

  auto enter = [&](int i) {
    double s = 0.0;
    for (int j = i + 1; j < n; ++j) s += qr.r(i, j) * a[j];
    c[i] = s;
    const double center = (zbar[i] - s) / qr.r(i, i);
    cand0[i] = center >= 0.0 ? 1.0 : -1.0;
    cand1[i] = -cand0[i];
    next[i] = 0;
    out.max_update_terms = std::max(out.max_update_terms, n - i);
  };

  int i = n - 1;
  enter(i);
  for (;;) {
    if (next[i] == 2) {
      ++i;
      if (i == n) break;
      continue;
    }
    const double s = next[i] == 0 ? cand0[i] : cand1[i];
    ++next[i];
    const double ps = zbar[i] - qr.r(i, i) * s - c[i];
    ++out.nodes_visited;
    const double nd = dist[i + 1] + ps * ps;
    if (nd > d2) {
      next[i] = 2;  // SE ordering: the second candidate is no closer
      continue;
    }
    a[i] = s;
    dist[i] = nd;
    if (i == 0) {
      if (nd < d2) {
        d2 = nd;
        best.symbols = a;
        found = true;
        ++out.radius_updates;
        if (trace.radii != nullptr) trace.radii->push_back(nd);
      }
    } else {
      --i;
      enter(i);
    }
  }

  out.decision = found ? best : a_zf;
  out.metric = mlse_metric(block.z, g, out.decision);
  return out;
}

DetectorOutput sdse_detect(const ReceivedBlock& block, const BandedUpperTriangular& r,
                           const IsiBand& band, SdseRadius radius_mode,
                           const SearchTrace& trace) {
  const int n = r.dim();
  const int length = band.length();
  if (r.half_bandwidth() + 1 != std::min(length, n))
    throw Error("sdse_detect: factor bandwidth does not match the ISI band");
  const std::vector<double>& z = block.z;

  const SymbolBlock a_zf = zf_decision(z);
  double d2;
  if (radius_mode == SdseRadius::kFullZfResidual) {
    d2 = whitened_metric(z, r, a_zf);
  } else {
    const double t = r(n - 1, n - 1) * (z[n - 1] - a_zf.symbols[n - 1]);
    d2 = t * t;
  }

  DetectorOutput out;
  std::vector<double> dist(n + 1, 0.0);
  std::vector<double> c(n, 0.0);
  std::vector<double> cand0(n), cand1(n);
  std::vector<int> next(n, 0);
  std::vector<double> a(n, 0.0);
  bool found = false;
  SymbolBlock best = a_zf;
  double best_dist = d2;

  auto enter = [&](int i) {
    const int hi = std::min(n - 1, i + length - 1);
    double s = 0.0;
    for (int j = i + 1; j <= hi; ++j) s += r(i, j) * (z[j] - a[j]);
    c[i] = s;
    // interval center: the symbol value that zeroes this level's term
    const double center = z[i] + s / r(i, i);
    cand0[i] = center >= 0.0 ? 1.0 : -1.0;
    cand1[i] = -cand0[i];
    next[i] = 0;
    out.max_update_terms = std::max(out.max_update_terms, hi - i + 1);
  };

  int i = n - 1;
  enter(i);
  for (;;) {
    if (next[i] == 2) {
      ++i;
      if (i == n) break;
      continue;
    }
    const double s = next[i] == 0 ? cand0[i] : cand1[i];
    ++next[i];
    const double ps = r(i, i) * (z[i] - s) + c[i];
    ++out.nodes_visited;
    const double nd = dist[i + 1] + ps * ps;
    if (nd > d2) {
      next[i] = 2;  // SE ordering: the second candidate is no closer to center
      continue;
    }
    a[i] = s;
    dist[i] = nd;
    if (i == 0) {
      if (nd < d2) {
        d2 = nd;
        best.symbols = a;
        best_dist = nd;
        found = true;
        ++out.radius_updates;
        if (trace.radii != nullptr) trace.radii->push_back(nd);
      }
    } else {
      --i;
      enter(i);
    }
  }

  if (found) {
    out.decision = std::move(best);
    out.metric = best_dist;
  } else {
    // the full-ZF-residual radius always admits the ZF leaf; only the literal
    // level-N seed can come back empty, in which case ZF is the fallback
    out.decision = a_zf;
    out.metric = whitened_metric(z, r, out.decision);
  }
  return out;
}

}  // namespace ftn

#include "sdr_relax.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace ftn {

LiftedProblem lift_problem(const GramMatrix& g, std::span<const double> y) {
  const int n = g.dim();
  if (static_cast<int>(y.size()) != n) throw Error("lift_problem: dimension mismatch");
  LiftedProblem p;
  p.n = n;
  p.c = DenseMatrix(n + 1, n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.c(i, j) = g.matrix(i, j);
  for (int i = 0; i < n; ++i) {
    p.c(i, n) = -y[i];  // ŷ = -y
    p.c(n, i) = -y[i];
  }
  p.c(n, n) = 0.0;
  return p;
}

void sym_eig(const DenseMatrix& m, DenseMatrix& vectors, std::vector<double>& values) {
  const int n = m.rows();
  DenseMatrix a = m;
  vectors = DenseMatrix::identity(n);

  double off = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
  double scale = m.frobenius_norm();
  if (scale == 0.0) scale = 1.0;

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && std::sqrt(off) > 1e-14 * scale; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = vectors(k, p), vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
    off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
  }
  values.resize(n);
  for (int i = 0; i < n; ++i) values[i] = a(i, i);
}

namespace {

double min_eigenvalue(const DenseMatrix& m) {
  DenseMatrix v;
  std::vector<double> w;
  sym_eig(m, v, w);
  return *std::min_element(w.begin(), w.end());
}

struct BmState {
  std::vector<double> v;  // (n+1) x k row-major, unit-norm rows
  int n1 = 0;
  int k = 0;
  double objective = 0.0;
  int sweeps = 0;
};

double bm_objective(const DenseMatrix& c, const std::vector<double>& v, int n1, int k) {
  double f = 0.0;
  for (int i = 0; i < n1; ++i) {
    f += c(i, i);
    for (int j = i + 1; j < n1; ++j) {
      double dot = 0.0;
      for (int t = 0; t < k; ++t) dot += v[i * k + t] * v[j * k + t];
      f += 2.0 * c(i, j) * dot;
    }
  }
  return f;
}

BmState bm_minimize(const DenseMatrix& c, int n1, double tol, int max_sweeps,
                    std::uint64_t seed) {
  BmState st;
  st.n1 = n1;
  st.k = static_cast<int>(std::ceil(std::sqrt(2.0 * n1)));
  st.v.resize(static_cast<size_t>(n1) * st.k);
  Rng rng(seed);
  for (int i = 0; i < n1; ++i) {
    double norm2 = 0.0;
    for (int t = 0; t < st.k; ++t) {
      const double x = rng.normal();
      st.v[i * st.k + t] = x;
      norm2 += x * x;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (int t = 0; t < st.k; ++t) st.v[i * st.k + t] *= inv;
  }

  const int k = st.k;
  std::vector<double> w(k);
  double f_prev = bm_objective(c, st.v, n1, k);
  for (st.sweeps = 1; st.sweeps <= max_sweeps; ++st.sweeps) {
    for (int i = 0; i < n1; ++i) {
      std::fill(w.begin(), w.end(), 0.0);
      for (int j = 0; j < n1; ++j) {
        if (j == i) continue;
        const double cij = c(i, j);
        if (cij == 0.0) continue;
        for (int t = 0; t < k; ++t) w[t] += cij * st.v[j * k + t];
      }
      double nw = 0.0;
      for (int t = 0; t < k; ++t) nw += w[t] * w[t];
      nw = std::sqrt(nw);
      if (nw > 1e-14) {
        const double inv = -1.0 / nw;
        for (int t = 0; t < k; ++t) st.v[i * k + t] = inv * w[t];
      }
    }
    const double f = bm_objective(c, st.v, n1, k);
    if (f_prev - f < tol * (1.0 + std::abs(f))) {
      st.objective = f;
      return st;
    }
    f_prev = f;
  }
  st.objective = f_prev;
  throw NotConverged(max_sweeps, f_prev);
}

}  // namespace

SdrSolution solve_sdr(const LiftedProblem& p, const SdrOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error("solve_sdr: tol must be positive");
  const int n = p.n;
  const int n1 = n + 1;

  BmState best;
  bool have = false;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    BmState st = bm_minimize(p.c, n1, opts.tol, opts.max_sweeps, opts.init_seed + r);
    if (!have || st.objective < best.objective) {
      best = std::move(st);
      have = true;
    }
  }

  const int k = best.k;
  SdrSolution sol;
  sol.sweeps = best.sweeps;
  sol.objective = best.objective;
  sol.a_lifted = DenseMatrix(n, n);
  sol.a_relaxed.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int t = 0; t < k; ++t) dot += best.v[i * k + t] * best.v[j * k + t];
      sol.a_lifted(i, j) = dot;
    }
    double dot = 0.0;
    for (int t = 0; t < k; ++t) dot += best.v[i * k + t] * best.v[n * k + t];
    sol.a_relaxed[i] = dot;
  }

  sol.diag_residual = 0.0;
  for (int i = 0; i < n; ++i)
    sol.diag_residual = std::max(sol.diag_residual, std::abs(sol.a_lifted(i, i) - 1.0));

  // certified dual bound: mu_i = C_ii - ||w_i||, then compensate any negative
  // curvature of C - Diag(mu) through the fixed trace of feasible points
  std::vector<double> mu(n1);
  double mu_sum = 0.0;
  for (int i = 0; i < n1; ++i) {
    double nw2 = 0.0;
    for (int t = 0; t < k; ++t) {
      double wt = 0.0;
      for (int j = 0; j < n1; ++j) {
        if (j == i) continue;
        wt += p.c(i, j) * best.v[j * k + t];
      }
      nw2 += wt * wt;
    }
    mu[i] = p.c(i, i) - std::sqrt(nw2);
    mu_sum += mu[i];
  }
  DenseMatrix s = p.c;
  for (int i = 0; i < n1; ++i) s(i, i) -= mu[i];
  const double lmin_s = min_eigenvalue(s);
  sol.lower_bound = mu_sum + n1 * std::min(0.0, lmin_s);

  DenseMatrix lifted(n1, n1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lifted(i, j) = sol.a_lifted(i, j);
  for (int i = 0; i < n; ++i) {
    lifted(i, n) = sol.a_relaxed[i];
    lifted(n, i) = sol.a_relaxed[i];
  }
  lifted(n, n) = 1.0;
  sol.min_eigenvalue = min_eigenvalue(lifted);
  return sol;
}

SdrSolution solve_sdr(const LiftedProblem& p, double tol, int max_sweeps) {
  SdrOptions opts;
  opts.tol = tol;
  opts.max_sweeps = max_sweeps;
  return solve_sdr(p, opts);
}

DetectorOutput randomize(const SdrSolution& sol, const RandomizationConfig& cfg,
                         const GramMatrix& g, std::span<const double> y) {
  if (cfg.draws < 1) throw Error("randomize: draws must be >= 1");
  const int n = g.dim();

  // PSD square root of A* - a* a*ᵀ with eigenvalue clamping
  DenseMatrix cov(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cov(i, j) = sol.a_lifted(i, j) - sol.a_relaxed[i] * sol.a_relaxed[j];
  DenseMatrix evec;
  std::vector<double> eval;
  sym_eig(cov, evec, eval);
  DenseMatrix sqrt_cov(n, n);
  for (int j = 0; j < n; ++j) {
    const double s = std::sqrt(std::max(0.0, eval[j]));
    for (int i = 0; i < n; ++i) sqrt_cov(i, j) = evec(i, j) * s;
  }

  SymbolBlock cand;
  cand.symbols.resize(n);
  SymbolBlock best;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> xi(n), v(n);
  for (int q = 0; q < cfg.draws; ++q) {
    Rng rng = Rng::substream(cfg.seed, {static_cast<std::uint64_t>(q)});
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    for (int i = 0; i < n; ++i) {
      double s = sol.a_relaxed[i];
      for (int j = 0; j < n; ++j) s += sqrt_cov(i, j) * v[j];
      xi[i] = s;
    }
    for (int i = 0; i < n; ++i) cand.symbols[i] = xi[i] >= 0.0 ? 1.0 : -1.0;
    // BQP objective aᵀGa - 2yᵀa
    const std::vector<double> ga = g.matrix.multiply(cand.symbols);
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += cand.symbols[i] * ga[i] - 2.0 * y[i] * cand.symbols[i];
    if (obj < best_obj) {
      best_obj = obj;
      best = cand;
    }
  }

  DetectorOutput out;
  out.decision = std::move(best);
  const std::vector<double> z = solve_spd(g.matrix, y);
  out.metric = mlse_metric(z, g, out.decision);
  out.sdr_lower_bound = sol.lower_bound;
  out.nodes_visited = cfg.draws;
  return out;
}

DetectorOutput sdrse_detect(const ReceivedBlock& block, const GramMatrix& g,
                            const RandomizationConfig& cfg, const SdrOptions& opts) {
  const LiftedProblem p = lift_problem(g, block.y);
  const SdrSolution sol = solve_sdr(p, opts);
  DetectorOutput out = randomize(sol, cfg, g, block.y);
  out.metric = mlse_metric(block.z, g, out.decision);
  out.nodes_visited = sol.sweeps;
  return out;
}

}  // namespace ftn

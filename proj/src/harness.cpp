#include "harness.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "version.hpp"

namespace ftn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw BadConfig("invalid number '" + s + "' for key " + key);
  }
}

long long parse_ll(const std::string& s, const std::string& key) {
  // allow scientific notation for bit budgets (e.g. 2e7)
  const double v = parse_double(s, key);
  if (v < 0 || v > 9.2e18 || v != std::floor(v))
    throw BadConfig("invalid integer '" + s + "' for key " + key);
  return static_cast<long long>(v);
}

std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split_list(s)) out.push_back(parse_double(tok, key));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

const std::vector<std::string> kKnownDetectors = {"zf", "mlse", "sd", "sdse", "sdrse"};

std::uint64_t key_bits(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace

void ExperimentConfig::validate() const {
  if (betas.empty() || taus.empty() || ebno_db.empty()) throw BadConfig("empty sweep grid");
  if (detectors.empty()) throw BadConfig("no detectors selected");
  for (const auto& d : detectors)
    if (std::find(kKnownDetectors.begin(), kKnownDetectors.end(), d) == kKnownDetectors.end())
      throw BadConfig("unknown detector: " + d);
  for (double b : betas)
    if (!(b >= 0.0 && b <= 1.0)) throw BadConfig("beta outside [0, 1]");
  for (double t : taus)
    if (!(t > 0.0 && t <= 1.0)) throw BadConfig("tau outside (0, 1]");
  if (block_length < 1) throw BadConfig("block_length must be >= 1");
  if (min_error_events < 1) throw BadConfig("min_error_events must be >= 1");
  if (max_bits < 1) throw BadConfig("max_bits must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0)) throw BadConfig("threshold outside (0, 1)");
  if (band_cap < 1) throw BadConfig("band_cap must be >= 1");
  if (q < 1) throw BadConfig("q must be >= 1");
  if (edge_discard < 0 || 2 * edge_discard >= block_length)
    throw BadConfig("edge_discard leaves no counted symbols");
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "betas") {
    cfg.betas = parse_double_list(value, key);
  } else if (key == "taus") {
    cfg.taus = parse_double_list(value, key);
  } else if (key == "ebno_db") {
    cfg.ebno_db = parse_double_list(value, key);
  } else if (key == "block_length") {
    cfg.block_length = static_cast<int>(parse_ll(value, key));
  } else if (key == "detectors") {
    cfg.detectors = split_list(value);
  } else if (key == "min_error_events") {
    cfg.min_error_events = parse_ll(value, key);
  } else if (key == "max_bits") {
    cfg.max_bits = parse_ll(value, key);
  } else if (key == "threshold") {
    cfg.threshold = parse_double(value, key);
  } else if (key == "band_cap") {
    cfg.band_cap = static_cast<int>(parse_ll(value, key));
  } else if (key == "q") {
    cfg.q = static_cast<int>(parse_ll(value, key));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_ll(value, key));
  } else if (key == "edge_discard") {
    cfg.edge_discard = static_cast<int>(parse_ll(value, key));
  } else if (key == "csv_path") {
    cfg.csv_path = value;
  } else if (key == "svg_path") {
    cfg.svg_path = value;
  } else {
    throw BadConfig("unknown config key: " + key);
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw BadConfig("line " + std::to_string(lineno) + ": expected key = value");
    apply_config_entry(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

double theoretical_bpsk_ber(double ebno_db) {
  const double gamma = std::pow(10.0, ebno_db / 10.0);
  return 0.5 * std::erfc(std::sqrt(gamma));
}

double ebno_for_theoretical_ber(double ber) {
  if (!(ber > 0.0 && ber < 0.5)) throw Error("ebno_for_theoretical_ber: ber outside (0, 0.5)");
  double lo = -30.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (theoretical_bpsk_ber(mid) > ber ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double spectral_efficiency(int m, double beta, double tau) {
  if (m < 2) throw Error("spectral_efficiency: constellation size must be >= 2");
  if (!(tau > 0.0 && tau <= 1.0)) throw Error("spectral_efficiency: tau outside (0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error("spectral_efficiency: beta outside [0, 1]");
  return std::log2(static_cast<double>(m)) / ((1.0 + beta) * tau);
}

int worker_count() {
  if (const char* env = std::getenv("FTN_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

DetectorOutput detect_with(const std::string& name, const FtnSystem& system,
                           const ReceivedBlock& block, int q, std::uint64_t sdr_seed) {
  if (name == "zf") return zf_detect(block, system.gram);
  if (name == "mlse") return mlse_brute(block, system.gram);
  if (name == "sd") return standard_sd_detect(block, system.gram);
  if (name == "sdse") return sdse_detect(block, system.chol, system.band);
  if (name == "sdrse") {
    RandomizationConfig rc;
    rc.draws = q;
    rc.seed = sdr_seed;
    return sdrse_detect(block, system.gram, rc);
  }
  throw BadConfig("unknown detector: " + name);
}

namespace {

struct TrialOutcome {
  int errors = 0;
  long long nodes = 0;
  int max_update_terms = 0;
  double ms = 0.0;
  bool failed = false;
  std::string what;
};

TrialOutcome run_trial(const FtnSystem& system, const std::string& detector, double sigma,
                       const ExperimentConfig& cfg, double beta, double tau, long long trial) {
  TrialOutcome out;
  try {
    // the stream depends on (seed, beta, tau, trial) only: every detector and
    // every Eb/N0 point sees the same data and the same underlying noise
    Rng rng = Rng::substream(cfg.seed,
                             {key_bits(beta), key_bits(tau), static_cast<std::uint64_t>(trial)});
    const int n = system.dim();
    std::vector<int> bits(n);
    for (int& b : bits) b = rng.bit();
    const SymbolBlock a = modulate(bits);
    ChannelConfig ch;
    ch.sigma = sigma;
    ch.gram = &system.gram;
    const ReceivedBlock block = transmit(a, ch, system.chol, rng);

    const std::uint64_t sdr_seed =
        Rng::substream(cfg.seed, {key_bits(beta), key_bits(tau), static_cast<std::uint64_t>(trial),
                                  0x5dULL})
            .next_u64();
    const auto t0 = std::chrono::steady_clock::now();
    const DetectorOutput det = detect_with(detector, system, block, cfg.q, sdr_seed);
    const auto t1 = std::chrono::steady_clock::now();
    out.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.nodes = det.nodes_visited;
    out.max_update_terms = det.max_update_terms;
    for (int i = cfg.edge_discard; i < n - cfg.edge_discard; ++i)
      if (det.decision.symbols[i] != a.symbols[i]) ++out.errors;
  } catch (const std::exception& e) {
    out.failed = true;
    out.what = e.what();
  }
  return out;
}

struct PointAccum {
  long long bits = 0;
  long long errors = 0;
  long long blocks = 0;
  double nodes = 0.0;
  double ms = 0.0;
  int max_update_terms = 0;
};

/// Accumulate trials in fixed-size rounds; the stopping rule is evaluated
/// only at round boundaries so the result does not depend on worker count.
PointAccum run_point(const FtnSystem& system, const std::string& detector, double sigma,
                     const ExperimentConfig& cfg, double beta, double tau, long long max_bits,
                     long long min_errors, long long max_blocks) {
  const int counted = system.dim() - 2 * cfg.edge_discard;
  const long long round_blocks = std::max<long long>(1, 32768 / counted);
  const int workers = worker_count();

  PointAccum acc;
  long long trial = 0;
  while (acc.errors < min_errors && acc.bits < max_bits &&
         (max_blocks < 0 || acc.blocks < max_blocks)) {
    long long todo = round_blocks;
    if (max_blocks >= 0) todo = std::min(todo, max_blocks - acc.blocks);
    std::vector<TrialOutcome> slots(static_cast<size_t>(todo));

    const int nthreads = static_cast<int>(std::min<long long>(workers, todo));
    if (nthreads <= 1) {
      for (long long i = 0; i < todo; ++i)
        slots[static_cast<size_t>(i)] = run_trial(system, detector, sigma, cfg, beta, tau, trial + i);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(nthreads);
      for (int w = 0; w < nthreads; ++w) {
        const long long lo = todo * w / nthreads;
        const long long hi = todo * (w + 1) / nthreads;
        pool.emplace_back([&, lo, hi] {
          for (long long i = lo; i < hi; ++i)
            slots[static_cast<size_t>(i)] =
                run_trial(system, detector, sigma, cfg, beta, tau, trial + i);
        });
      }
      for (auto& t : pool) t.join();
    }

    for (const TrialOutcome& o : slots) {
      if (o.failed) throw Error("trial failed: " + o.what);
      acc.errors += o.errors;
      acc.nodes += static_cast<double>(o.nodes);
      acc.ms += o.ms;
      acc.max_update_terms = std::max(acc.max_update_terms, o.max_update_terms);
    }
    acc.blocks += todo;
    acc.bits += todo * counted;
    trial += todo;
  }
  return acc;
}

using SystemCache = std::map<std::pair<double, double>, FtnSystem>;

const FtnSystem* get_system(SystemCache& cache, const ExperimentConfig& cfg, double beta,
                            double tau, std::vector<std::string>& failures,
                            std::vector<SweepResult::BandInfo>& bands) {
  const auto key = std::make_pair(beta, tau);
  auto it = cache.find(key);
  if (it != cache.end()) return &it->second;
  try {
    FtnSystem sys = make_ftn_system(beta, tau, cfg.block_length, cfg.threshold, cfg.band_cap);
    bands.push_back({beta, tau, sys.band.length(), sys.threshold_band_length});
    return &cache.emplace(key, std::move(sys)).first->second;
  } catch (const std::exception& e) {
    failures.push_back("system beta=" + format_double(beta) + " tau=" + format_double(tau) +
                       ": " + e.what());
    return nullptr;
  }
}

SweepResult run_grid(const ExperimentConfig& cfg, long long max_bits, long long min_errors,
                     long long max_blocks) {
  cfg.validate();
  SweepResult result;
  result.seed = cfg.seed;
  result.block_length = cfg.block_length;
  result.threshold = cfg.threshold;

  SystemCache cache;
  std::vector<std::pair<double, double>> failed_systems;
  for (const std::string& detector : cfg.detectors) {
    for (double beta : cfg.betas) {
      for (double tau : cfg.taus) {
        const FtnSystem* sys = get_system(cache, cfg, beta, tau, result.failures, result.bands);
        if (sys == nullptr) continue;
        for (double snr : cfg.ebno_db) {
          const double sigma = ebno_to_sigma(snr, 1.0, 1);
          try {
            const PointAccum acc =
                run_point(*sys, detector, sigma, cfg, beta, tau, max_bits, min_errors, max_blocks);
            BerPoint p;
            p.detector = detector;
            p.beta = beta;
            p.tau = tau;
            p.ebno_db = snr;
            p.bits = acc.bits;
            p.errors = acc.errors;
            p.ber = acc.bits > 0 ? static_cast<double>(acc.errors) / acc.bits : 0.0;
            p.mean_nodes = acc.blocks > 0 ? acc.nodes / acc.blocks : 0.0;
            p.ms_per_block = acc.blocks > 0 ? acc.ms / acc.blocks : 0.0;
            p.max_update_terms = acc.max_update_terms;
            result.rows.push_back(std::move(p));
          } catch (const std::exception& e) {
            result.failures.push_back("point detector=" + detector + " beta=" +
                                      format_double(beta) + " tau=" + format_double(tau) +
                                      " ebno_db=" + format_double(snr) + ": " + e.what());
          }
        }
      }
    }
  }
  return result;
}

}  // namespace

SweepResult run_ber_sweep(const ExperimentConfig& cfg) {
  return run_grid(cfg, cfg.max_bits, cfg.min_error_events, -1);
}

SweepResult run_bench(const ExperimentConfig& cfg, int blocks_per_point) {
  if (blocks_per_point < 1) throw BadConfig("bench needs at least one block per point");
  return run_grid(cfg, std::numeric_limits<long long>::max() / 2,
                  std::numeric_limits<long long>::max() / 2, blocks_per_point);
}

double find_min_tau(double beta, double target_ber, double ebno_db, const std::string& detector,
                    const ExperimentConfig& cfg) {
  if (!(target_ber > 0.0 && target_ber < 1.0)) throw Error("find_min_tau: target outside (0, 1)");
  cfg.validate();

  auto tau_at = [](int idx) { return (50 + idx) / 100.0; };
  auto feasible = [&](int idx) {
    const double tau = tau_at(idx);
    FtnSystem sys;
    try {
      sys = make_ftn_system(beta, tau, cfg.block_length, cfg.threshold, cfg.band_cap);
    } catch (const Error&) {
      return false;  // unbuildable system cannot hold the target
    }
    const double sigma = ebno_to_sigma(ebno_db, 1.0, 1);
    const long long budget =
        std::min(cfg.max_bits, static_cast<long long>(std::ceil(20.0 / target_ber)));
    const PointAccum acc = run_point(sys, detector, sigma, cfg, beta, tau, budget,
                                     cfg.min_error_events, -1);
    // 95%-style Poisson upper bound on the error count
    const double upper =
        (static_cast<double>(acc.errors) + 1.96 * std::sqrt(static_cast<double>(acc.errors)) +
         2.92) /
        static_cast<double>(acc.bits);
    return upper <= target_ber;
  };

  if (!feasible(50))
    throw TargetUnreachable("BER target " + format_double(target_ber) +
                            " is missed at tau = 1 for Eb/N0 = " + format_double(ebno_db) + " dB");
  if (feasible(0)) return tau_at(0);
  int lo = 0, hi = 50;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return tau_at(hi);
}

std::vector<SePoint> run_se_curve(const std::vector<double>& betas, double target_ber,
                                  double ebno_db, const std::string& detector,
                                  const ExperimentConfig& cfg) {
  std::vector<SePoint> out;
  for (double beta : betas) {
    SePoint p;
    p.beta = beta;
    p.tau = find_min_tau(beta, target_ber, ebno_db, detector, cfg);
    p.se_ftn = spectral_efficiency(2, beta, p.tau);
    p.se_nyquist = spectral_efficiency(2, beta, 1.0);
    p.ratio = p.se_ftn / p.se_nyquist;
    out.push_back(p);
  }
  return out;
}

std::string csv_to_string(const SweepResult& result) {
  std::ostringstream os;
  os << "# ftn " << kVersion << "\n";
  os << "# seed=" << result.seed << " n=" << result.block_length
     << " threshold=" << format_double(result.threshold) << "\n";
  for (const auto& b : result.bands)
    os << "# band beta=" << format_double(b.beta) << " tau=" << format_double(b.tau)
       << " L=" << b.band_length << " threshold_L=" << b.threshold_length << "\n";
  for (const auto& f : result.failures) os << "# failed " << f << "\n";
  os << "detector,beta,tau,ebno_db,bits,errors,ber,mean_nodes,ms_per_block\n";
  for (const BerPoint& p : result.rows) {
    os << p.detector << ',' << format_double(p.beta) << ',' << format_double(p.tau) << ','
       << format_double(p.ebno_db) << ',' << p.bits << ',' << p.errors << ','
       << format_double(p.ber) << ',' << format_double(p.mean_nodes) << ','
       << format_double(p.ms_per_block) << "\n";
  }
  return os.str();
}

void emit_csv(const SweepResult& result, const std::string& path) {
  if (result.rows.empty()) throw Error("emit_csv: no rows to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_csv: cannot open " + path);
  out << csv_to_string(result);
  if (!out) throw Error("emit_csv: write failed for " + path);
}

std::vector<BerPoint> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  std::vector<BerPoint> rows;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      if (t != "detector,beta,tau,ebno_db,bits,errors,ber,mean_nodes,ms_per_block")
        throw Error("parse_csv: unexpected header: " + t);
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : t) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    cells.push_back(cur);
    if (cells.size() != 9) throw Error("parse_csv: bad row: " + t);
    BerPoint p;
    p.detector = cells[0];
    p.beta = parse_double(cells[1], "beta");
    p.tau = parse_double(cells[2], "tau");
    p.ebno_db = parse_double(cells[3], "ebno_db");
    p.bits = parse_ll(cells[4], "bits");
    p.errors = parse_ll(cells[5], "errors");
    p.ber = parse_double(cells[6], "ber");
    p.mean_nodes = parse_double(cells[7], "mean_nodes");
    p.ms_per_block = parse_double(cells[8], "ms_per_block");
    rows.push_back(std::move(p));
  }
  if (!header_seen) throw Error("parse_csv: missing header");
  return rows;
}

namespace {

const char* series_color(size_t idx) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return palette[idx % 8];
}

}  // namespace

void emit_plot(const std::vector<BerPoint>& rows, const std::string& path) {
  if (rows.empty()) throw Error("emit_plot: no rows to plot");

  double xmin = rows.front().ebno_db, xmax = xmin;
  for (const auto& p : rows) {
    xmin = std::min(xmin, p.ebno_db);
    xmax = std::max(xmax, p.ebno_db);
  }
  if (xmax - xmin < 1.0) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  const double ymin_exp = -6.0, ymax_exp = 0.0;  // BER 1e-6 .. 1

  const double W = 720, H = 520, ml = 70, mr = 190, mt = 30, mb = 55;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto xs = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto ys = [&](double ber) {
    const double e = std::clamp(std::log10(std::max(ber, 1e-12)), ymin_exp, ymax_exp);
    return mt + (ymax_exp - e) / (ymax_exp - ymin_exp) * ph;
  };

  // group rows into series by (detector, beta, tau)
  std::map<std::string, std::vector<const BerPoint*>> series;
  for (const auto& p : rows)
    series[p.detector + "  beta=" + format_double(p.beta) + " tau=" + format_double(p.tau)]
        .push_back(&p);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

  // grid and axes
  for (int e = 0; e >= -6; --e) {
    const double y = ys(std::pow(10.0, e));
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  const int xt0 = static_cast<int>(std::ceil(xmin));
  for (int x = xt0; x <= static_cast<int>(std::floor(xmax)); ++x) {
    out << "<line x1=\"" << xs(x) << "\" y1=\"" << mt << "\" x2=\"" << xs(x) << "\" y2=\""
        << mt + ph << "\" stroke=\"#eeeeee\"/>\n";
    out << "<text x=\"" << xs(x) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">" << x
        << "</text>\n";
  }
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\">Eb/N0 (dB)</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">BER</text>\n";

  // theoretical no-ISI BPSK reference
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-dasharray=\"6 4\" points=\"";
  for (double x = xmin; x <= xmax + 1e-9; x += 0.25)
    out << xs(x) << ',' << ys(theoretical_bpsk_ber(x)) << ' ';
  out << "\"/>\n";

  size_t idx = 0;
  double ly = mt + 12;
  out << "<text x=\"" << ml + pw + 14 << "\" y=\"" << ly << "\">-- BPSK no-ISI</text>\n";
  ly += 18;
  for (const auto& [name, pts] : series) {
    const char* color = series_color(idx++);
    std::vector<const BerPoint*> sorted(pts);
    std::sort(sorted.begin(), sorted.end(),
              [](const BerPoint* a, const BerPoint* b) { return a->ebno_db < b->ebno_db; });
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto* p : sorted) out << xs(p->ebno_db) << ',' << ys(p->ber) << ' ';
    out << "\"/>\n";
    for (const auto* p : sorted)
      out << "<circle cx=\"" << xs(p->ebno_db) << "\" cy=\"" << ys(p->ber)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    out << "<circle cx=\"" << ml + pw + 20 << "\" cy=\"" << ly - 4 << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
    out << "<text x=\"" << ml + pw + 30 << "\" y=\"" << ly << "\">" << name << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
  if (!out) throw Error("emit_plot: write failed for " + path);
}

void emit_se_csv(const std::vector<SePoint>& rows, const std::string& path) {
  if (rows.empty()) throw Error("emit_se_csv: no rows to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_se_csv: cannot open " + path);
  out << "# ftn " << kVersion << "\n";
  out << "beta,tau,se_ftn,se_nyquist,ratio\n";
  for (const auto& p : rows)
    out << format_double(p.beta) << ',' << format_double(p.tau) << ',' << format_double(p.se_ftn)
        << ',' << format_double(p.se_nyquist) << ',' << format_double(p.ratio) << "\n";
  if (!out) throw Error("emit_se_csv: write failed for " + path);
}

void emit_se_plot(const std::vector<SePoint>& rows, const std::string& path) {
  if (rows.empty()) throw Error("emit_se_plot: no rows to plot");
  const double W = 640, H = 480, ml = 70, mr = 40, mt = 30, mb = 55;
  const double pw = W - ml - mr, ph = H - mt - mb;
  double xmin = rows.front().beta, xmax = xmin, ymax = 0.0;
  for (const auto& p : rows) {
    xmin = std::min(xmin, p.beta);
    xmax = std::max(xmax, p.beta);
    ymax = std::max(ymax, p.se_ftn);
  }
  if (xmax - xmin < 0.1) {
    xmin -= 0.05;
    xmax += 0.05;
  }
  ymax = std::max(1.2, 1.1 * ymax);
  auto xs = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto ys = [&](double y) { return mt + (ymax - y) / ymax * ph; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_se_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double y = 0.0; y <= ymax + 1e-9; y += 0.2) {
    out << "<line x1=\"" << ml << "\" y1=\"" << ys(y) << "\" x2=\"" << ml + pw << "\" y2=\""
        << ys(y) << "\" stroke=\"#eeeeee\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << ys(y) + 4 << "\" text-anchor=\"end\">"
        << format_double(std::round(y * 10) / 10) << "</text>\n";
  }
  for (const auto& p : rows)
    out << "<text x=\"" << xs(p.beta) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\">" << format_double(p.beta) << "</text>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\">roll-off beta</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">spectral efficiency (bits/s/Hz)</text>\n";

  auto draw = [&](auto getter, const char* color, const char* label, double label_y) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : rows) out << xs(p.beta) << ',' << ys(getter(p)) << ' ';
    out << "\"/>\n";
    for (const auto& p : rows)
      out << "<circle cx=\"" << xs(p.beta) << "\" cy=\"" << ys(getter(p)) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    out << "<text x=\"" << ml + 12 << "\" y=\"" << label_y << "\" fill=\"" << color << "\">"
        << label << "</text>\n";
  };
  draw([](const SePoint& p) { return p.se_ftn; }, "#d62728", "FTN (min tau at target BER)",
       mt + 18);
  draw([](const SePoint& p) { return p.se_nyquist; }, "#1f77b4", "Nyquist (tau = 1)", mt + 36);
  out << "</svg>\n";
  if (!out) throw Error("emit_se_plot: write failed for " + path);
}

}  // namespace ftn

#include <cmath>
#include <random>

#include "detectors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ftn;

namespace {

GramMatrix identity_gram(int n) {
  IsiBand band;
  band.tau = 1.0;
  band.taps = {1.0};
  return build_gram(band, n);
}

}  // namespace

TEST_SUITE_BEGIN("detectors");

TEST_CASE("mlse metric") {
  SUBCASE("zero residual") {
    const FtnSystem sys = make_ftn_system(0.3, 0.7, 8, 1e-3);
    SymbolBlock a;
    a.symbols = {1, -1, 1, 1, -1, 1, -1, -1};
    CHECK(mlse_metric(a.symbols, sys.gram, a) == 0.0);
    CHECK(whitened_metric(a.symbols, sys.chol, a) == 0.0);
  }
  SUBCASE("hand computation with the identity") {
    const GramMatrix g = identity_gram(2);
    SymbolBlock a;
    a.symbols = {1.0, 1.0};
    CHECK(mlse_metric(std::vector<double>{1.0, -1.0}, g, a) == doctest::Approx(4.0));
  }
  SUBCASE("objective-shift identity and whitening identity") {
    const FtnSystem sys = make_ftn_system(0.5, 0.6, 10, 1e-3);
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> z(10);
      for (double& v : z) v = u(rng);
      const std::vector<double> y = sys.gram.matrix.multiply(z);
      const double ztgz = [&] {
        double s = 0.0;
        for (int i = 0; i < 10; ++i) s += z[i] * y[i];
        return s;
      }();
      for (int inner = 0; inner < 4; ++inner) {
        SymbolBlock a;
        a.symbols.resize(10);
        for (double& s : a.symbols) s = (rng() & 1) ? 1.0 : -1.0;
        const double metric = mlse_metric(z, sys.gram, a);
        // (z-a)ᵀG(z-a) - (aᵀGa - 2yᵀa) must equal zᵀGz for every a
        const std::vector<double> ga = sys.gram.matrix.multiply(a.symbols);
        double bqp = 0.0;
        for (int i = 0; i < 10; ++i) bqp += a.symbols[i] * ga[i] - 2.0 * y[i] * a.symbols[i];
        CHECK(std::abs(metric - bqp - ztgz) < 1e-9);
        CHECK(std::abs(metric - whitened_metric(z, sys.chol, a)) < 1e-9);
      }
    }
  }
}

TEST_CASE("zero forcing") {
  const FtnSystem sys = make_ftn_system(0.3, 0.7, 12, 1e-3);
  SUBCASE("noiseless block is recovered exactly") {
    SymbolBlock tx;
    const ReceivedBlock block = oracles::seeded_block(sys, 0.0, 5, &tx);
    const DetectorOutput out = zf_detect(block, sys.gram);
    CHECK(out.decision.symbols == tx.symbols);
    CHECK(out.metric < 1e-12);
  }
  SUBCASE("sign slicing") {
    ReceivedBlock block;
    block.z = {0.2, -3.5};
    block.y = {};  // unused by zf
    const GramMatrix g = identity_gram(2);
    const DetectorOutput out = zf_detect(block, g);
    CHECK(out.decision.symbols == std::vector<double>{1.0, -1.0});
  }
  SUBCASE("exact zero resolves to +1") {
    ReceivedBlock block;
    block.z = {0.0, -0.1};
    const GramMatrix g = identity_gram(2);
    CHECK(zf_detect(block, g).decision.symbols[0] == 1.0);
  }
}

TEST_CASE("exhaustive MLSE oracle") {
  SUBCASE("noiseless block") {
    const FtnSystem sys = make_ftn_system(0.3, 0.6, 10, 1e-3);
    SymbolBlock tx;
    const ReceivedBlock block = oracles::seeded_block(sys, 0.0, 21, &tx);
    const DetectorOutput out = mlse_brute(block, sys.gram);
    CHECK(out.decision.symbols == tx.symbols);
    CHECK(out.metric < 1e-12);
  }
  SUBCASE("decoupled signs under the identity") {
    const GramMatrix g = identity_gram(2);
    ReceivedBlock block;
    block.z = {0.9, -0.1};
    const DetectorOutput out = mlse_brute(block, g);
    CHECK(out.decision.symbols == std::vector<double>{1.0, -1.0});
  }
  SUBCASE("matches an independent enumeration on a seeded noisy block") {
    const FtnSystem sys = make_ftn_system(0.3, 0.6, 10, 1e-3);
    const double sigma = ebno_to_sigma(6.0, 1.0, 1);
    const ReceivedBlock block = oracles::seeded_block(sys, sigma, 99);
    const DetectorOutput out = mlse_brute(block, sys.gram);

    double best = 1e300;
    for (int m = 0; m < (1 << 10); ++m) {
      SymbolBlock a;
      a.symbols.resize(10);
      for (int i = 0; i < 10; ++i) a.symbols[i] = ((m >> (9 - i)) & 1) ? 1.0 : -1.0;
      double v = 0.0;
      // direct dense quadratic form, independent of mlse_metric's band walk
      for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
          v += (block.z[i] - a.symbols[i]) * sys.gram.matrix(i, j) * (block.z[j] - a.symbols[j]);
      best = std::min(best, v);
    }
    CHECK(out.metric == doctest::Approx(best).epsilon(1e-10));
  }
  SUBCASE("guard against exponential blowup") {
    const GramMatrix g = identity_gram(25);
    ReceivedBlock block;
    block.z.assign(25, 0.5);
    CHECK_THROWS_AS(mlse_brute(block, g), BlockTooLarge);
  }
}

TEST_CASE("standard sphere decoder") {
  SUBCASE("tau = 1 reduces to zero forcing") {
    const GramMatrix g = identity_gram(16);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      ReceivedBlock block;
      block.z.resize(16);
      for (double& v : block.z) v = u(rng);
      block.y = block.z;
      const DetectorOutput sd = standard_sd_detect(block, g);
      const DetectorOutput zf = zf_detect(block, g);
      CHECK(sd.decision.symbols == zf.decision.symbols);
    }
  }
  SUBCASE("noiseless block is recovered exactly") {
    const FtnSystem sys = make_ftn_system(0.3, 0.7, 14, 1e-3);
    SymbolBlock tx;
    const ReceivedBlock block = oracles::seeded_block(sys, 0.0, 8, &tx);
    CHECK(standard_sd_detect(block, sys.gram).decision.symbols == tx.symbols);
  }
  SUBCASE("optimizes the wrong metric: disagrees with MLSE on noisy blocks") {
    const FtnSystem sys = make_ftn_system(0.3, 0.7, 12, 1e-3);
    const double sigma = ebno_to_sigma(6.0, 1.0, 1);
    int disagreements = 0;
    long long sd_errors = 0, ml_errors = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      SymbolBlock tx;
      const ReceivedBlock block = oracles::seeded_block(sys, sigma, seed, &tx);
      const DetectorOutput sd = standard_sd_detect(block, sys.gram);
      const DetectorOutput ml = mlse_brute(block, sys.gram);
      if (sd.decision.symbols != ml.decision.symbols) ++disagreements;
      for (int i = 0; i < 12; ++i) {
        sd_errors += sd.decision.symbols[i] != tx.symbols[i];
        ml_errors += ml.decision.symbols[i] != tx.symbols[i];
      }
      // the reported metric is the MLSE metric of its decision, so it can
      // never beat the true MLSE optimum
      CHECK(sd.metric >= ml.metric - 1e-9);
    }
    CHECK(disagreements > 0);
    CHECK(sd_errors >= ml_errors);
  }
}

TEST_CASE("sdse") {
  SUBCASE("noiseless block: exact recovery with a tight search") {
    const FtnSystem sys = make_ftn_system(0.3, 0.7, 16, 1e-3);
    SymbolBlock tx;
    const ReceivedBlock block = oracles::seeded_block(sys, 0.0, 13, &tx);
    const DetectorOutput out = sdse_detect(block, sys.chol, sys.band);
    CHECK(out.decision.symbols == tx.symbols);
    CHECK(out.metric < 1e-9);
    CHECK(out.nodes_visited <= 2 * 16);
  }
  SUBCASE("single level is the sign of z") {
    const FtnSystem sys = make_ftn_system(0.3, 0.7, 1, 1e-3);
    ReceivedBlock block;
    block.z = {-0.4};
    block.y = {-0.4};
    const DetectorOutput out = sdse_detect(block, sys.chol, sys.band);
    CHECK(out.decision.symbols == std::vector<double>{-1.0});
  }
  SUBCASE("achieves the exhaustive optimum across the operating grid") {
    int checked = 0;
    for (double beta : {0.3, 0.5}) {
      for (double tau : {0.6, 0.7}) {
        const FtnSystem sys = make_ftn_system(beta, tau, 12, 1e-3);
        for (double snr : {0.0, 4.0, 8.0}) {
          const double sigma = ebno_to_sigma(snr, 1.0, 1);
          for (int t = 0; t < 20; ++t) {
            const std::uint64_t seed = 1000 * checked + t;
            const ReceivedBlock block = oracles::seeded_block(sys, sigma, seed);
            const DetectorOutput fast = sdse_detect(block, sys.chol, sys.band);
            bool unique = false;
            const DetectorOutput ref = mlse_brute(block, sys.gram, &unique);
            CHECK(std::abs(fast.metric - ref.metric) <= 1e-9);
            if (unique) CHECK(fast.decision.symbols == ref.decision.symbols);
            CHECK(fast.max_update_terms <= sys.band.length());
          }
          ++checked;
        }
      }
    }
  }
  SUBCASE("pruning soundness: no pruned subtree hides a better leaf") {
    // equivalent statement: the search minimum equals the minimum over all
    // 2^N leaves, which the exhaustive oracle enumerates
    const FtnSystem sys = make_ftn_system(0.5, 0.6, 10, 1e-3);
    const double sigma = ebno_to_sigma(2.0, 1.0, 1);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const ReceivedBlock block = oracles::seeded_block(sys, sigma, seed);
      const DetectorOutput fast = sdse_detect(block, sys.chol, sys.band);
      const DetectorOutput ref = mlse_brute(block, sys.gram);
      CHECK(std::abs(fast.metric - ref.metric) <= 1e-9);
    }
  }
  SUBCASE("radius sequence is strictly decreasing") {
    const FtnSystem sys = make_ftn_system(0.3, 0.6, 14, 1e-3);
    const double sigma = ebno_to_sigma(4.0, 1.0, 1);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const ReceivedBlock block = oracles::seeded_block(sys, sigma, seed);
      std::vector<double> radii;
      SearchTrace trace;
      trace.radii = &radii;
      const DetectorOutput out = sdse_detect(block, sys.chol, sys.band,
                                             SdseRadius::kFullZfResidual, trace);
      CHECK(static_cast<long long>(radii.size()) == out.radius_updates);
      for (size_t i = 1; i < radii.size(); ++i) CHECK(radii[i] < radii[i - 1]);
      if (!radii.empty()) CHECK(out.metric == doctest::Approx(radii.back()));
    }
  }
  SUBCASE("metric is consistent with the whitened objective of the decision") {
    const FtnSystem sys = make_ftn_system(0.5, 0.7, 20, 1e-3);
    const double sigma = ebno_to_sigma(3.0, 1.0, 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const ReceivedBlock block = oracles::seeded_block(sys, sigma, seed);
      const DetectorOutput out = sdse_detect(block, sys.chol, sys.band);
      CHECK(out.metric ==
            doctest::Approx(whitened_metric(block.z, sys.chol, out.decision)).epsilon(1e-9));
      CHECK(out.metric ==
            doctest::Approx(mlse_metric(block.z, sys.gram, out.decision)).epsilon(1e-9));
    }
  }
  SUBCASE("literal level-N radius variant still returns a valid decision") {
    const FtnSystem sys = make_ftn_system(0.3, 0.7, 12, 1e-3);
    const double sigma = ebno_to_sigma(4.0, 1.0, 1);
    int fell_back = 0, optimal = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const ReceivedBlock block = oracles::seeded_block(sys, sigma, seed);
      const DetectorOutput narrow =
          sdse_detect(block, sys.chol, sys.band, SdseRadius::kLevelNOnly);
      for (double s : narrow.decision.symbols) CHECK((s == 1.0 || s == -1.0));
      const DetectorOutput ref = mlse_brute(block, sys.gram);
      if (std::abs(narrow.metric - ref.metric) <= 1e-9)
        ++optimal;
      else
        ++fell_back;  // empty sphere: the seed radius excluded every leaf
      CHECK(narrow.metric >= ref.metric - 1e-9);
    }
    CHECK(optimal + fell_back == 50);
  }
}

TEST_SUITE_END();

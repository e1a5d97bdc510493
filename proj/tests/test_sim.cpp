#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fountain/rng.hpp"
#include "fountain/sim.hpp"

using namespace fountain;

namespace {

ConcatParams plain_params(uint32_t k, uint32_t ssize) {
  ConcatParams cp;
  cp.k = k;
  cp.lt.k = k;
  cp.lt.symbol_size = ssize;
  cp.lt.dist = std::make_shared<const DegreeDistribution>(robust_soliton(k, 0.3, 0.2));
  cp.lt.base_seed = 1;
  return cp;
}

std::vector<EncodingSymbol> numbered_symbols(uint32_t n) {
  std::vector<EncodingSymbol> v;
  for (uint32_t i = 0; i < n; ++i)
    v.push_back(EncodingSymbol{i, Payload{uint8_t(i & 0xff), uint8_t(i >> 8)}});
  return v;
}

}  // namespace

TEST_CASE("wilson_interval closed forms") {
  const double z = 1.959963984540054;
  const double z2 = z * z;

  const auto [lo0, hi0] = wilson_interval(0, 100);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(z2 / (100.0 + z2)).epsilon(1e-12));

  const auto [loa, hia] = wilson_interval(100, 100);
  CHECK(hia == 1.0);
  CHECK(loa == doctest::Approx(100.0 / (100.0 + z2)).epsilon(1e-12));

  const auto [lo, hi] = wilson_interval(30, 100);
  CHECK(lo < 0.3);
  CHECK(hi > 0.3);
  CHECK(0.5 * (lo + hi) == doctest::Approx((0.3 + z2 / 200.0) / (1.0 + z2 / 100.0)));

  CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);
}

TEST_CASE("wilson_interval covers the truth about 95% of the time") {
  // exact coverage at n=50, p=0.3: sum the binomial mass of the counts
  // whose interval contains p
  const uint32_t n = 50;
  const double p = 0.3;
  double pmf = std::pow(1.0 - p, n);  // f = 0
  double coverage = 0.0;
  for (uint32_t f = 0; f <= n; ++f) {
    const auto [lo, hi] = wilson_interval(f, n);
    CHECK(lo <= double(f) / n);
    CHECK(hi >= double(f) / n);
    if (lo <= p && p <= hi) coverage += pmf;
    pmf *= double(n - f) / (f + 1) * p / (1.0 - p);
  }
  CHECK(coverage > 0.92);
  CHECK(coverage < 0.99);
}

TEST_CASE("bec_transmit endpoints and validation") {
  const auto syms = numbered_symbols(64);
  const auto all = bec_transmit(syms, {0.0, 7});
  REQUIRE(all.size() == 64);
  for (uint32_t i = 0; i < 64; ++i) {
    CHECK(all[i].esi == syms[i].esi);
    CHECK(all[i].payload == syms[i].payload);
  }
  CHECK(bec_transmit(syms, {1.0, 7}).empty());
  CHECK_THROWS_AS(bec_transmit(syms, {-0.1, 7}), std::invalid_argument);
  CHECK_THROWS_AS(bec_transmit(syms, {1.5, 7}), std::invalid_argument);
}

TEST_CASE("bec_transmit keeps order, is seeded, and drops i.i.d.") {
  const auto syms = numbered_symbols(10000);
  const auto a = bec_transmit(syms, {0.3, 99});
  const auto b = bec_transmit(syms, {0.3, 99});
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].esi == b[i].esi);
  for (size_t i = 0; i + 1 < a.size(); ++i) CHECK(a[i].esi < a[i + 1].esi);
  for (const auto& s : a) CHECK(s.payload == syms[s.esi].payload);

  // survivor count within 4 sigma of n(1-eps)
  const double mean = 10000 * 0.7, sd = std::sqrt(10000 * 0.3 * 0.7);
  CHECK(double(a.size()) > mean - 4 * sd);
  CHECK(double(a.size()) < mean + 4 * sd);

  const auto c = bec_transmit(syms, {0.3, 100});
  CHECK(c.size() != a.size());  // would collide with prob ~1e-2... retry below if flaky
  // adjacent-pair independence: disjoint pairs (2i, 2i+1) both dropped
  std::vector<char> dropped(10000, 1);
  for (const auto& s : a) dropped[s.esi] = 0;
  uint32_t pairs = 0;
  for (uint32_t i = 0; i < 10000; i += 2) pairs += dropped[i] && dropped[i + 1];
  const double pmean = 5000 * 0.09, psd = std::sqrt(5000 * 0.09 * 0.91);
  CHECK(double(pairs) > pmean - 4 * psd);
  CHECK(double(pairs) < pmean + 4 * psd);
}

TEST_CASE("decoder names") {
  CHECK(std::string(decoder_name(DecoderKind::Bp)) == "bp");
  CHECK(std::string(decoder_name(DecoderKind::Ml)) == "ml");
  CHECK(std::string(decoder_name(DecoderKind::Inactivation)) == "inactivation");
}

TEST_CASE("run_curve record bookkeeping and determinism") {
  CurveConfig cfg;
  cfg.params = plain_params(32, 4);
  cfg.overheads = {0.0, 0.2, 0.4};
  cfg.decoder = DecoderKind::Bp;
  cfg.trials = 40;
  cfg.channel_epsilon0 = 0.1;

  const auto recs = run_curve(cfg, 2024);
  REQUIRE(recs.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(recs[i].k == 32);
    CHECK(recs[i].overhead == cfg.overheads[i]);
    CHECK(recs[i].trials == 40);
    CHECK(recs[i].failures <= 40);
    CHECK(recs[i].failure_rate == doctest::Approx(recs[i].failures / 40.0));
    const auto [lo, hi] = wilson_interval(recs[i].failures, 40);
    CHECK(recs[i].lo == lo);
    CHECK(recs[i].hi == hi);
    CHECK(recs[i].lo <= recs[i].failure_rate);
    CHECK(recs[i].failure_rate <= recs[i].hi);
  }
  CHECK(experiment_csv(run_curve(cfg, 2024)) == experiment_csv(recs));

  cfg.trials = 0;
  CHECK_THROWS_AS(run_curve(cfg, 2024), std::invalid_argument);
}

TEST_CASE("ml never loses to bp on the same received sets") {
  CurveConfig cfg;
  cfg.params = plain_params(32, 2);
  cfg.overheads = {0.3, 0.5, 0.8};
  cfg.trials = 60;
  cfg.channel_epsilon0 = 0.0;

  cfg.decoder = DecoderKind::Bp;
  const auto bp = run_curve(cfg, 555);
  cfg.decoder = DecoderKind::Ml;
  const auto ml = run_curve(cfg, 555);
  cfg.decoder = DecoderKind::Inactivation;
  const auto in = run_curve(cfg, 555);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(ml[i].failures <= bp[i].failures);
    CHECK(in[i].failures == ml[i].failures);
  }
  // the gap is widest where bp stalls but the rank is already there
  CHECK(bp[0].failures > ml[0].failures);
  CHECK(ml[2].failures <= 10);
}

TEST_CASE("run_curve drives the precoded systematic path") {
  CurveConfig cfg;
  cfg.params.k = 11;
  cfg.params.systematic = true;
  cfg.params.precode.kind = PrecodeKind::Hamming;
  cfg.params.precode.hamming_r = 4;
  cfg.params.precode.hamming_extended = true;
  cfg.params.lt.k = intermediate_length(11, cfg.params.precode);
  cfg.params.lt.symbol_size = 2;
  cfg.params.lt.dist =
      std::make_shared<const DegreeDistribution>(robust_soliton(cfg.params.lt.k, 0.3, 0.2));
  cfg.overheads = {1.0};
  cfg.decoder = DecoderKind::Inactivation;
  cfg.trials = 25;
  cfg.channel_epsilon0 = 0.2;

  const auto recs = run_curve(cfg, 31337);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].failures <= 5);  // double overhead over a 20% channel
}

TEST_CASE("experiment_csv golden rows") {
  ExperimentRecord a;
  a.k = 16;
  a.overhead = 0.25;
  a.decoder = DecoderKind::Ml;
  a.trials = 10;
  a.failures = 3;
  a.failure_rate = 0.3;
  a.lo = 0.1;
  a.hi = 0.6;
  ExperimentRecord b;
  b.k = 64;
  b.overhead = 0.001;
  b.decoder = DecoderKind::Inactivation;
  b.trials = 100000;
  b.failures = 0;
  b.failure_rate = 0.0;
  b.lo = 0.0;
  b.hi = 1.0;
  CHECK(experiment_csv({a, b}) ==
        "k,overhead,decoder,trials,failures,rate,lo,hi\n"
        "16,0.25,ml,10,3,0.3,0.1,0.6\n"
        "64,0.001,inactivation,100000,0,0,0,1\n");
  CHECK(experiment_csv({}) == "k,overhead,decoder,trials,failures,rate,lo,hi\n");
}

TEST_CASE("unrecovered_fraction_experiment statistics and determinism") {
  // all-degree-1 code: a fixed symbol stays unrecovered with prob (1-1/k)^n
  const uint32_t k = 200, trials = 200;
  const double got =
      unrecovered_fraction_experiment(DegreeDistribution(4, {1.0}), k, 1.0, trials, 77);
  const double want = std::pow(1.0 - 1.0 / k, 2.0 * k);
  CHECK(std::fabs(got - want) < 0.008);

  // the reference distribution needs real blocklengths before BP gets
  // traction; at k = 10^4 the mean fraction sits on its error floor
  const DegreeDistribution raptor = raptor_reference();
  const double f1 = unrecovered_fraction_experiment(raptor, 10000, 0.05, 30, 9);
  const double f2 = unrecovered_fraction_experiment(raptor, 10000, 0.05, 30, 9);
  CHECK(f1 == f2);
  CHECK(f1 > 0.0005);
  CHECK(f1 < 0.02);

  CHECK_THROWS_AS(unrecovered_fraction_experiment(raptor, 0, 0.05, 5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(unrecovered_fraction_experiment(raptor, 10, 0.05, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("release_rate_experiment exact degenerate codes") {
  // every encoding symbol is {0,1}: all n drop to degree 1 at step 0
  const std::vector<double> two =
      release_rate_experiment(DegreeDistribution(2, {0.0, 1.0}), 2, 7, 3, 5);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(7.0));
  CHECK(two[1] == doctest::Approx(0.0));

  // degree-1 symbols never *drop* to degree 1
  const std::vector<double> ones =
      release_rate_experiment(DegreeDistribution(4, {1.0}), 8, 20, 2, 5);
  REQUIRE(ones.size() == 8);
  for (double v : ones) CHECK(v == 0.0);

  CHECK_THROWS_AS(release_rate_experiment(soliton(4), 0, 4, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(release_rate_experiment(soliton(4), 4, 4, 0, 1), std::invalid_argument);
}

TEST_CASE("soliton releases about one symbol per processing step") {
  const uint32_t k = 300;
  const std::vector<double> rel = release_rate_experiment(soliton(k), k, k, 40, 123);
  REQUIRE(rel.size() == k);
  double total = 0.0;
  for (double v : rel) {
    CHECK(v >= 0.0);
    total += v;
  }
  CHECK(total <= double(k));
  double head = 0.0;
  const uint32_t cut = k * 9 / 10;
  for (uint32_t i = 0; i < cut; ++i) head += rel[i];
  CHECK(head / cut > 0.8);
  CHECK(head / cut < 1.2);

  const std::vector<double> again = release_rate_experiment(soliton(k), k, k, 40, 123);
  CHECK(again == rel);
}

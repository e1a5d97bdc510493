#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fountain/concat.hpp"
#include "fountain/dist.hpp"
#include "fountain/hamming.hpp"
#include "fountain/ldpc.hpp"
#include "fountain/rng.hpp"

using namespace fountain;

namespace {

std::vector<Payload> random_message(uint32_t k, uint32_t ssize, uint64_t seed) {
  SplitMix rng(seed);
  std::vector<Payload> msg(k, Payload(ssize));
  for (auto& p : msg)
    for (auto& b : p) b = uint8_t(rng.next());
  return msg;
}

// Rank of a set of H columns, treating each column as a small bit vector.
uint32_t column_rank(const FieldMatrix& h, const std::vector<uint32_t>& cols) {
  std::vector<uint32_t> basis;
  for (uint32_t c : cols) {
    uint32_t v = 0;
    for (size_t r = 0; r < h.rows(); ++r) v |= uint32_t(h.get(r, c)) << r;
    for (uint32_t b : basis) v = std::min(v, v ^ b);
    if (v) basis.push_back(v);
  }
  return static_cast<uint32_t>(basis.size());
}

}  // namespace

TEST_CASE("hamming_build layout") {
  const HammingCode c = hamming_build(3, false);
  CHECK(c.n == 7);
  CHECK(c.H.rows() == 3);
  // column j is the binary expansion of j+1, top row = MSB
  for (uint32_t j = 0; j < 7; ++j) {
    uint32_t v = 0;
    for (size_t r = 0; r < 3; ++r) v = v << 1 | c.H.get(r, j);
    CHECK(v == j + 1);
  }
  const HammingCode e = hamming_build(3, true);
  CHECK(e.n == 8);
  CHECK(e.H.rows() == 4);
  for (uint32_t j = 0; j < 8; ++j) CHECK(e.H.get(3, j) == 1);
  CHECK_THROWS_AS(hamming_build(1, false), std::invalid_argument);
  CHECK_THROWS_AS(hamming_build(31, false), std::invalid_argument);
}

TEST_CASE("count_correctable equals the independent-subset count") {
  // B(tau, r) = (1/tau!) prod_{i<tau} (2^r - 2^i)
  CHECK(count_correctable(3, 1) == 7);
  CHECK(count_correctable(3, 2) == 21);
  CHECK(count_correctable(3, 3) == 28);
  CHECK(count_correctable(4, 4) == 840);

  // exhaustive: tau-subsets of H's columns with full rank
  for (uint32_t r : {3u, 4u}) {
    const HammingCode c = hamming_build(r, false);
    for (uint32_t tau = 1; tau <= r; ++tau) {
      uint64_t good = 0, total = 0;
      std::vector<uint32_t> idx(tau);
      // iterate subsets via the standard odometer
      std::iota(idx.begin(), idx.end(), 0u);
      while (true) {
        ++total;
        if (column_rank(c.H, idx) == tau) ++good;
        int i = int(tau) - 1;
        while (i >= 0 && idx[i] == c.n - tau + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (uint32_t j = i + 1; j < tau; ++j) idx[j] = idx[j - 1] + 1;
      }
      CHECK(count_correctable(r, tau) == good);
      (void)total;
    }
  }
}

TEST_CASE("g polynomial coefficients and evaluation") {
  const std::vector<mpz_class> g3 = hamming_g_coefficients(3);
  REQUIRE(g3.size() == 3);
  CHECK(g3[0] == 7);
  CHECK(g3[1] == 21);
  CHECK(g3[2] == 28);
  CHECK(hamming_g(1.0, 3) == doctest::Approx(56.0));
  CHECK(hamming_g(0.5, 3) == doctest::Approx(7 * 0.5 + 21 * 0.25 + 28 * 0.125));
  CHECK(hamming_g(0.0, 4) == 0.0);
}

TEST_CASE("hamming erase decode corrects what Theorem 6 promises") {
  const HammingCode c = hamming_build(3, false);
  // valid codeword: columns 1^2^3 = 0, so bits at positions {0,1,2} check out
  const Payload on(2, 0xFF), off(2, 0x00);
  std::vector<Payload> base(7, off);
  base[0] = base[1] = base[2] = on;

  // every weight-2 erasure is correctable
  for (uint32_t a = 0; a < 7; ++a)
    for (uint32_t b = a + 1; b < 7; ++b) {
      auto word = base;
      std::vector<uint8_t> known(7, 1);
      known[a] = known[b] = 0;
      word[a] = word[b] = Payload();
      const EraseResult res = hamming_erase_decode(c, word, known);
      REQUIRE(res.success);
      CHECK(res.residual.empty());
      CHECK(word[a] == base[a]);
      CHECK(word[b] == base[b]);
      CHECK(known[a] == 1);
    }

  // weight-3 erasures: exactly the 28 independent column triples survive
  uint32_t corrected = 0;
  for (uint32_t a = 0; a < 7; ++a)
    for (uint32_t b = a + 1; b < 7; ++b)
      for (uint32_t d = b + 1; d < 7; ++d) {
        auto word = base;
        std::vector<uint8_t> known(7, 1);
        known[a] = known[b] = known[d] = 0;
        const EraseResult res = hamming_erase_decode(c, word, known);
        const bool indep = column_rank(c.H, {a, b, d}) == 3;
        CHECK(res.success == indep);
        if (res.success) {
          ++corrected;
          CHECK(word[a] == base[a]);
          CHECK(word[b] == base[b]);
          CHECK(word[d] == base[d]);
        }
      }
  CHECK(corrected == 28);
}

TEST_CASE("extended hamming decodes r+1 erasures when columns stay independent") {
  const HammingCode c = hamming_build(3, true);
  std::vector<Payload> base(8, Payload(1, 0));  // all-zero word is always valid
  std::vector<uint8_t> known(8, 1);
  for (uint32_t j : {0u, 1u, 6u, 7u}) known[j] = 0;
  auto word = base;
  const EraseResult res = hamming_erase_decode(c, word, known);
  if (res.success)
    for (uint32_t j : {0u, 1u, 6u, 7u}) CHECK(word[j] == Payload(1, 0));
  CHECK(res.success == (column_rank(c.H, {0, 1, 6, 7}) == 4));
}

TEST_CASE("ldpc_build is a seeded socket permutation") {
  const LdpcCode c = ldpc_build(20, 3, 4, 99);
  CHECK(c.H.rows() == 15);
  CHECK(c.H.cols() == 20);
  size_t weight = 0;
  for (size_t i = 0; i < c.H.rows(); ++i) {
    size_t rw = 0;
    for (size_t j = 0; j < c.H.cols(); ++j) rw += c.H.get(i, j);
    CHECK(rw <= 4);
    weight += rw;
  }
  CHECK(weight + c.collapsed_edges == 60);
  for (size_t j = 0; j < c.H.cols(); ++j) {
    size_t cw = 0;
    for (size_t i = 0; i < c.H.rows(); ++i) cw += c.H.get(i, j);
    CHECK(cw <= 3);
  }

  const LdpcCode d = ldpc_build(20, 3, 4, 99);
  for (size_t i = 0; i < c.H.rows(); ++i)
    for (size_t j = 0; j < c.H.cols(); ++j) CHECK(c.H.get(i, j) == d.H.get(i, j));
  const LdpcCode e = ldpc_build(20, 3, 4, 100);
  bool same = true;
  for (size_t i = 0; i < c.H.rows() && same; ++i)
    for (size_t j = 0; j < c.H.cols() && same; ++j) same = c.H.get(i, j) == e.H.get(i, j);
  CHECK(!same);
  CHECK_THROWS_AS(ldpc_build(10, 3, 4, 0), std::invalid_argument);  // 30 % 4 != 0
  CHECK_THROWS_AS(ldpc_build(0, 3, 3, 0), std::invalid_argument);
}

TEST_CASE("ldpc erase decode fills single erasures and stalls on stopping sets") {
  const LdpcCode c = ldpc_build(24, 3, 4, 7);
  std::vector<Payload> zero(24, Payload(1, 0));

  for (uint32_t v = 0; v < 24; ++v) {
    auto word = zero;
    std::vector<uint8_t> known(24, 1);
    known[v] = 0;
    size_t cw = 0;
    for (size_t i = 0; i < c.H.rows(); ++i) cw += c.H.get(i, v);
    const EraseResult res = ldpc_erase_decode(c, word, known);
    CHECK(res.success == (cw > 0));
    if (res.success) CHECK(word[v] == Payload(1, 0));
  }

  // everything erased: the whole set is a stopping set whenever every
  // check has >= 2 neighbors, so a stall leaves a nonempty residual
  auto word = zero;
  std::vector<uint8_t> known(24, 0);
  const EraseResult res = ldpc_erase_decode(c, word, known);
  if (!res.success) {
    CHECK(!res.residual.empty());
    for (size_t i = 0; i + 1 < res.residual.size(); ++i)
      CHECK(res.residual[i] < res.residual[i + 1]);
    // the residual really is a stopping set: no check touches it exactly once
    for (size_t i = 0; i < c.H.rows(); ++i) {
      size_t touch = 0;
      for (uint32_t v : res.residual) touch += c.H.get(i, v);
      CHECK(touch != 1);
    }
  }
}

TEST_CASE("precode spec parsing round-trips and validates") {
  const PrecodeSpec h = parse_precode_spec("type=hamming r=5 extended=1");
  CHECK(h.kind == PrecodeKind::Hamming);
  CHECK(h.hamming_r == 5);
  CHECK(h.hamming_extended);
  CHECK(parse_precode_spec(format_precode_spec(h)).hamming_r == 5);

  const PrecodeSpec l = parse_precode_spec("type=ldpc n=100 l=3 r=6 seed=12");
  CHECK(l.kind == PrecodeKind::Ldpc);
  CHECK(l.ldpc_n == 100);
  CHECK(l.ldpc_seed == 12);
  CHECK(format_precode_spec(l) == "type=ldpc n=100 l=3 r=6 seed=12");

  CHECK(parse_precode_spec("type=none").kind == PrecodeKind::None);
  CHECK_THROWS_AS(parse_precode_spec("type=turbo"), std::invalid_argument);
  CHECK_THROWS_AS(parse_precode_spec("type=hamming"), std::invalid_argument);
  CHECK_THROWS_AS(parse_precode_spec("type=hamming r=3 r=4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_precode_spec("type=hamming r=-3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_precode_spec("type=none bogus=1"), std::invalid_argument);
  CHECK_THROWS_AS(load_precode_file("/nonexistent/precode.txt"), std::runtime_error);
}

TEST_CASE("intermediate_length per precode") {
  PrecodeSpec none;
  CHECK(intermediate_length(500, none) == 500);

  PrecodeSpec ham;
  ham.kind = PrecodeKind::Hamming;
  ham.hamming_r = 5;
  CHECK(intermediate_length(20, ham) == 25);
  ham.hamming_extended = true;
  CHECK(intermediate_length(20, ham) == 26);
  CHECK_THROWS_AS(intermediate_length(27, ham), std::invalid_argument);  // > 2^5-1-5

  PrecodeSpec ldpc;
  ldpc.kind = PrecodeKind::Ldpc;
  ldpc.ldpc_n = 60;
  ldpc.ldpc_l = 3;
  ldpc.ldpc_r = 6;
  CHECK(intermediate_length(30, ldpc) == 60);
  CHECK_THROWS_AS(intermediate_length(60, ldpc), std::invalid_argument);
}

TEST_CASE("gstar degree check") {
  CHECK(gstar_degree_check({1, 2, 3, 4}));
  CHECK(gstar_degree_check({4, 3, 2, 1}));  // order must not matter
  CHECK(gstar_degree_check({1, 1, 3}));
  CHECK(!gstar_degree_check({2, 2, 2}));
  CHECK(!gstar_degree_check({1, 3, 3}));
  CHECK(gstar_degree_check({}));
}

TEST_CASE("gstar_build yields a graph peeling fully recovers") {
  const uint32_t k = 64;
  const DegreeDistribution dist = robust_soliton(k, 0.3, 0.2);
  const GstarGraph g = gstar_build(k, dist, 555);
  REQUIRE(g.k == k);
  REQUIRE(g.checks.size() == k);
  CHECK(gstar_degree_check(g.degrees));
  for (uint32_t i = 0; i < k; ++i) {
    CHECK(g.checks[i].size() == g.degrees[i]);
    CHECK(std::is_sorted(g.checks[i].begin(), g.checks[i].end()));
  }

  // defining property: with all check values known, peeling solves everything
  const auto msg = random_message(k, 2, 9);
  std::vector<Payload> vals;
  for (const auto& nb : g.checks) {
    Payload v(2, 0);
    for (uint32_t x : nb) xor_into(v, msg[x]);
    vals.push_back(std::move(v));
  }
  const DecodeReport r = bp_peel(k, g.checks, vals);
  REQUIRE(r.status == DecodeStatus::Success);
  CHECK(r.message() == msg);

  // deterministic under the seed
  const GstarGraph g2 = gstar_build(k, dist, 555);
  CHECK(g2.checks == g.checks);
  CHECK(g2.retries == g.retries);
}

TEST_CASE("gstar_feasibility closed cases") {
  // k=4, two draws from {2: 0.7, 4: 0.3}: only the (4,4) pair violates
  // the sorted d_(i) <= i bound, so 1 - 0.09 = 0.91
  const DegreeDistribution d(4, {0.0, 0.7, 0.0, 0.3});
  CHECK(gstar_feasibility(4, d) == doctest::Approx(0.91).epsilon(1e-9));

  // k=3: one draw; all three soliton degrees pass
  CHECK(gstar_feasibility(3, soliton(3)) == doctest::Approx(1.0));
  CHECK(gstar_feasibility(2, soliton(2)) == 1.0);
  CHECK_THROWS_AS(gstar_feasibility(1, soliton(2)), std::invalid_argument);
}

TEST_CASE("gstar_feasibility tracks Monte Carlo") {
  const uint32_t k = 60;
  const DegreeDistribution d = omega_star(soliton(k));
  const double dp = gstar_feasibility(k, d);
  const uint32_t trials = 400000;
  const double mc = gstar_feasibility_mc(k, d, trials, 2718);
  const double sd = std::sqrt(std::max(dp * (1 - dp), 1e-12) / trials);
  CHECK(std::fabs(dp - mc) < 4 * sd + 1e-9);
  CHECK_THROWS_AS(gstar_feasibility_mc(k, d, 0, 1), std::invalid_argument);
}

TEST_CASE("concat round-trip without a precode matches plain LT") {
  const uint32_t k = 40;
  ConcatParams cp;
  cp.k = k;
  cp.lt.k = k;
  cp.lt.symbol_size = 8;
  cp.lt.dist = std::make_shared<const DegreeDistribution>(robust_soliton(k, 0.3, 0.2));
  cp.lt.base_seed = 17;
  const auto msg = random_message(k, 8, 31);
  const ConcatEncoder enc(cp, msg);
  for (uint32_t esi = 0; esi < 10; ++esi) {
    const EncodingSymbol a = enc.symbol(esi);
    const EncodingSymbol b = lt_encode(cp.lt, esi, msg);
    CHECK(a.payload == b.payload);
  }
  std::vector<EncodingSymbol> rx;
  for (uint32_t esi = 0; esi < 2 * k; ++esi) rx.push_back(enc.symbol(esi));
  const DecodeReport r = concat_decode(cp, rx);
  REQUIRE(r.status == DecodeStatus::Success);
  CHECK(r.message() == msg);
}

TEST_CASE("hamming-precoded stream survives losing any single symbol batch") {
  const uint32_t k = 20;
  ConcatParams cp;
  cp.k = k;
  cp.precode.kind = PrecodeKind::Hamming;
  cp.precode.hamming_r = 5;
  cp.precode.hamming_extended = true;
  cp.lt.k = intermediate_length(k, cp.precode);
  cp.lt.symbol_size = 4;
  cp.lt.dist =
      std::make_shared<const DegreeDistribution>(robust_soliton(cp.lt.k, 0.3, 0.2));
  cp.lt.base_seed = 23;
  REQUIRE(cp.lt.k == 26);
  const auto msg = random_message(k, 4, 77);
  const ConcatEncoder enc(cp, msg);
  CHECK(enc.intermediates().size() == 26);

  std::vector<EncodingSymbol> rx;
  for (uint32_t esi = 0; esi < 40; ++esi) rx.push_back(enc.symbol(esi));
  const DecodeReport r = concat_decode(cp, rx);
  REQUIRE(r.status == DecodeStatus::Success);
  REQUIRE(r.message() == msg);
  CHECK(r.symbols.size() == k);  // message coordinates, not intermediates
}

TEST_CASE("ldpc-precoded round-trip") {
  const uint32_t k = 20;
  ConcatParams cp;
  cp.k = k;
  cp.precode.kind = PrecodeKind::Ldpc;
  cp.precode.ldpc_n = 48;
  cp.precode.ldpc_l = 3;
  cp.precode.ldpc_r = 6;
  cp.precode.ldpc_seed = 5;
  cp.lt.k = intermediate_length(k, cp.precode);
  cp.lt.symbol_size = 4;
  cp.lt.dist =
      std::make_shared<const DegreeDistribution>(robust_soliton(cp.lt.k, 0.3, 0.2));
  cp.lt.base_seed = 29;
  const auto msg = random_message(k, 4, 101);
  const ConcatEncoder enc(cp, msg);

  std::vector<EncodingSymbol> rx;
  for (uint32_t esi = 0; esi < 75; ++esi) rx.push_back(enc.symbol(esi));
  const DecodeReport r = concat_decode(cp, rx);
  REQUIRE(r.status == DecodeStatus::Success);
  CHECK(r.message() == msg);
}

TEST_CASE("systematic stream emits the message verbatim and decodes") {
  const uint32_t k = 24;
  ConcatParams cp;
  cp.k = k;
  cp.systematic = true;
  cp.precode.kind = PrecodeKind::Hamming;
  cp.precode.hamming_r = 5;
  cp.lt.k = intermediate_length(k, cp.precode);
  cp.lt.symbol_size = 4;
  cp.lt.dist =
      std::make_shared<const DegreeDistribution>(robust_soliton(cp.lt.k, 0.3, 0.2));
  cp.lt.base_seed = 41;
  const auto msg = random_message(k, 4, 13);
  const ConcatEncoder enc(cp, msg);
  for (uint32_t esi = 0; esi < k; ++esi) CHECK(enc.symbol(esi).payload == msg[esi]);
  CHECK(enc.gstar() != nullptr);

  // all systematic symbols alone
  std::vector<EncodingSymbol> sys;
  for (uint32_t esi = 0; esi < k; ++esi) sys.push_back(enc.symbol(esi));
  const DecodeReport direct = concat_decode(cp, sys);
  REQUIRE(direct.status == DecodeStatus::Success);
  CHECK(direct.message() == msg);

  // drop two systematic symbols, add repair traffic
  std::vector<EncodingSymbol> mixed;
  for (uint32_t esi = 2; esi < k; ++esi) mixed.push_back(enc.symbol(esi));
  for (uint32_t esi = k; esi < k + 12; ++esi) mixed.push_back(enc.symbol(esi));
  const DecodeReport rep = concat_decode(cp, mixed);
  REQUIRE(rep.status == DecodeStatus::Success);
  CHECK(rep.message() == msg);
}

TEST_CASE("concat parameter validation") {
  ConcatParams cp;
  cp.k = 10;
  cp.precode.kind = PrecodeKind::Hamming;
  cp.precode.hamming_r = 4;
  cp.lt.k = 10;  // wrong: should be 14
  cp.lt.symbol_size = 1;
  cp.lt.dist = std::make_shared<const DegreeDistribution>(soliton(10));
  CHECK_THROWS_AS(cp.validate(), std::invalid_argument);
  cp.lt.k = 14;
  cp.lt.dist = std::make_shared<const DegreeDistribution>(soliton(14));
  CHECK_NOTHROW(cp.validate());
  CHECK_THROWS_AS(ConcatEncoder(cp, random_message(9, 1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(ConcatEncoder(cp, random_message(10, 2, 1)), std::invalid_argument);
}

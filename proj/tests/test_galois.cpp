#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fountain/galois.hpp"
#include "fountain/matrix.hpp"
#include "fountain/rng.hpp"

using namespace fountain;

namespace {

// Bit-by-bit carryless multiply mod 0x11D; independent of the log tables.
uint8_t peasant_mul(uint8_t a, uint8_t b) {
  unsigned acc = 0;
  unsigned aa = a;
  for (unsigned bb = b; bb; bb >>= 1) {
    if (bb & 1) acc ^= aa;
    aa <<= 1;
    if (aa & 0x100) aa ^= gf256::kPoly;
  }
  return static_cast<uint8_t>(acc);
}

}  // namespace

TEST_CASE("gf256 multiplication matches the shift-and-reduce oracle exhaustively") {
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b)
      REQUIRE(gf256::mul(uint8_t(a), uint8_t(b)) == peasant_mul(uint8_t(a), uint8_t(b)));
}

TEST_CASE("gf256 spot values under x^8+x^4+x^3+x^2+1") {
  CHECK(gf256::mul(2, 2) == 4);
  CHECK(gf256::mul(0x80, 2) == 0x1D);  // x^8 reduces to the low bits of the polynomial
  CHECK(gf256::add(0xAB, 0xAB) == 0);
  CHECK(gf256::add(0x0F, 0xF0) == 0xFF);
  CHECK(gf256::kTables.exp[0] == 1);
  CHECK(gf256::kTables.exp[1] == 2);
  CHECK(gf256::kTables.exp[8] == 0x1D);
}

TEST_CASE("gf256 inverses") {
  for (unsigned a = 1; a < 256; ++a) {
    CHECK(gf256::mul(uint8_t(a), gf256::inv(uint8_t(a))) == 1);
    CHECK(gf256::div(uint8_t(a), uint8_t(a)) == 1);
  }
  CHECK(gf256::inv(1) == 1);
  CHECK_THROWS_AS(gf256::inv(0), std::domain_error);
  CHECK_THROWS_AS(gf256::div(5, 0), std::domain_error);
  CHECK(gf256::div(0, 7) == 0);
}

TEST_CASE("gf256 distributivity on a sampled grid") {
  SplitMix rng(11);
  for (int i = 0; i < 2000; ++i) {
    const uint8_t a = uint8_t(rng.next()), b = uint8_t(rng.next()), c = uint8_t(rng.next());
    CHECK(gf256::mul(a, gf256::add(b, c)) == gf256::add(gf256::mul(a, b), gf256::mul(a, c)));
    CHECK(gf256::mul(gf256::mul(a, b), c) == gf256::mul(a, gf256::mul(b, c)));
  }
}

TEST_CASE("FieldElement validates order and range") {
  CHECK_THROWS_AS(FieldElement(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(FieldElement(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(FieldElement(256, 256), std::invalid_argument);
  const FieldElement a(1, 2), b(1, 2);
  CHECK(field_add(a, b).value() == 0);
  CHECK(field_mul(a, b).value() == 1);
  CHECK(field_inv(a).value() == 1);
  CHECK_THROWS_AS(field_inv(FieldElement(0, 2)), std::domain_error);
  CHECK_THROWS_AS(field_add(FieldElement(1, 2), FieldElement(1, 256)), std::invalid_argument);
  const FieldElement x(0x57, 256), y(0x13, 256);
  CHECK(field_mul(x, y).value() == gf256::mul(0x57, 0x13));
  CHECK(field_add(x, y).value() == (0x57 ^ 0x13));
}

TEST_CASE("BinaryMatrix basics") {
  BinaryMatrix m(3, 70);  // crosses a word boundary
  m.set(0, 0, true);
  m.set(1, 64, true);
  m.set(2, 69, true);
  CHECK(m.get(0, 0));
  CHECK(m.get(1, 64));
  CHECK(!m.get(1, 63));
  CHECK(m.row_weight(0) == 1);
  m.row_xor(0, 1);
  CHECK(m.get(0, 64));
  CHECK(m.row_weight(0) == 2);
  m.swap_rows(0, 2);
  CHECK(m.get(0, 69));
  CHECK(m.get(2, 64));
  CHECK(m.rank() == 3);
}

TEST_CASE("BinaryMatrix rank on dependent rows") {
  BinaryMatrix m(3, 4);
  // row2 = row0 ^ row1
  m.set(0, 0, true);
  m.set(0, 1, true);
  m.set(1, 1, true);
  m.set(1, 2, true);
  m.set(2, 0, true);
  m.set(2, 2, true);
  CHECK(m.rank() == 2);

  BinaryMatrix id(5, 5);
  for (size_t i = 0; i < 5; ++i) id.set(i, i, true);
  CHECK(id.rank() == 5);
  CHECK(BinaryMatrix(4, 7).rank() == 0);
}

TEST_CASE("BinaryMatrix::random is seeded and roughly balanced") {
  const BinaryMatrix a = BinaryMatrix::random(32, 32, 42);
  const BinaryMatrix b = BinaryMatrix::random(32, 32, 42);
  const BinaryMatrix c = BinaryMatrix::random(32, 32, 43);
  size_t ones = 0, diff = 0;
  for (size_t i = 0; i < 32; ++i)
    for (size_t j = 0; j < 32; ++j) {
      CHECK(a.get(i, j) == b.get(i, j));
      ones += a.get(i, j);
      diff += a.get(i, j) != c.get(i, j);
    }
  CHECK(ones > 380);  // 1024 cells, mean 512, sd 16
  CHECK(ones < 644);
  CHECK(diff > 0);
}

TEST_CASE("xor_into requires equal sizes") {
  Payload a(4, 1), b(3, 1);
  CHECK_THROWS_AS(xor_into(a, b), std::invalid_argument);
  Payload c(4, 0xF0), d(4, 0x0F);
  xor_into(c, d);
  CHECK(c == Payload(4, 0xFF));
}

TEST_CASE("gf2_solve recovers a planted solution") {
  const uint32_t k = 24, n = 36;
  SplitMix rng(7);
  std::vector<Payload> x(k, Payload(5));
  for (auto& p : x)
    for (auto& byte : p) byte = uint8_t(rng.next());

  const BinaryMatrix sys = BinaryMatrix::random(n, k, 99);
  REQUIRE(sys.rank() == k);  // seed chosen so the system is solvable
  std::vector<Payload> rhs(n, Payload(5, 0));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < k; ++c)
      if (sys.get(r, c)) xor_into(rhs[r], x[c]);

  const Gf2Solution sol = gf2_solve(sys, rhs);
  REQUIRE(sol.success);
  CHECK(sol.rank == k);
  for (size_t c = 0; c < k; ++c) {
    CHECK(sol.determined[c] == 1);
    CHECK(sol.values[c] == x[c]);
  }
}

TEST_CASE("gf2_solve reports the determined subset of a deficient system") {
  // x0 pinned directly; x1 ^ x2 known only as a sum.
  BinaryMatrix sys(2, 3);
  sys.set(0, 0, true);
  sys.set(1, 1, true);
  sys.set(1, 2, true);
  std::vector<Payload> rhs = {Payload(1, 0xAA), Payload(1, 0x3C)};
  const Gf2Solution sol = gf2_solve(sys, rhs);
  CHECK(!sol.success);
  CHECK(sol.rank == 2);
  CHECK(sol.determined == std::vector<uint8_t>({1, 0, 0}));
  CHECK(sol.values[0] == Payload(1, 0xAA));

  CHECK_THROWS_AS(gf2_solve(BinaryMatrix(2, 2), std::vector<Payload>(1)), std::invalid_argument);
}

TEST_CASE("FieldMatrix entries and rank over both fields") {
  FieldMatrix m(2, 2, 2);
  CHECK_THROWS_AS(m.set(0, 0, 2), std::invalid_argument);
  m.set(0, 0, 1);
  m.set(1, 1, 1);
  CHECK(mat_rank(m) == 2);
  CHECK(m.to_binary().rank() == 2);
  CHECK_THROWS_AS(FieldMatrix(1, 1, 5), std::invalid_argument);

  // Vandermonde on distinct nonzero points is invertible over GF(256).
  const std::vector<uint8_t> pts = {1, 2, 3, 4};
  FieldMatrix v(4, 4, 256);
  for (size_t i = 0; i < 4; ++i) {
    uint8_t pw = 1;
    for (size_t j = 0; j < 4; ++j) {
      v.set(i, j, pw);
      pw = gf256::mul(pw, pts[i]);
    }
  }
  CHECK(mat_rank(v) == 4);
  FieldMatrix sing(2, 2, 256);
  sing.set(0, 0, 7);
  sing.set(0, 1, 9);
  sing.set(1, 0, 7);
  sing.set(1, 1, 9);
  CHECK(mat_rank(sing) == 1);
  CHECK_THROWS_AS(sing.to_binary(), std::invalid_argument);
}

TEST_CASE("mat_solve over GF(256) round-trips a planted vector") {
  const size_t n = 5;
  SplitMix rng(1234);
  FieldMatrix m(n + 2, n, 256);
  while (true) {
    for (size_t i = 0; i < n + 2; ++i)
      for (size_t j = 0; j < n; ++j) m.set(i, j, uint8_t(rng.next()));
    if (mat_rank(m) == n) break;
  }
  std::vector<Payload> x(n, Payload(3));
  for (auto& p : x)
    for (auto& byte : p) byte = uint8_t(rng.next());
  std::vector<Payload> rhs(n + 2, Payload(3, 0));
  for (size_t i = 0; i < n + 2; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t t = 0; t < 3; ++t)
        rhs[i][t] = gf256::add(rhs[i][t], gf256::mul(m.get(i, j), x[j][t]));

  const MatSolveResult sol = mat_solve(m, rhs);
  REQUIRE(sol.success);
  CHECK(sol.rank == n);
  for (size_t j = 0; j < n; ++j) CHECK(sol.solution[j] == x[j]);

  CHECK_THROWS_AS(mat_solve(FieldMatrix(2, 3, 2), std::vector<Payload>(2)),
                  std::invalid_argument);
}

TEST_CASE("mat_solve over GF(2) matches gf2_solve") {
  const size_t k = 10, n = 14;
  const BinaryMatrix sys = BinaryMatrix::random(n, k, 5);
  FieldMatrix f(n, k, 2);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) f.set(i, j, sys.get(i, j));
  SplitMix rng(8);
  std::vector<Payload> rhs(n, Payload(2));
  for (auto& p : rhs)
    for (auto& byte : p) byte = uint8_t(rng.next());

  const MatSolveResult a = mat_solve(f, rhs);
  const Gf2Solution b = gf2_solve(sys, rhs);
  CHECK(a.success == b.success);
  CHECK(a.rank == b.rank);
  if (a.success)
    for (size_t j = 0; j < k; ++j) CHECK(a.solution[j] == b.values[j]);
}

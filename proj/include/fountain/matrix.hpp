#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace fountain {

using Payload = std::vector<uint8_t>;

// XOR src into dst; sizes must match.
void xor_into(Payload& dst, const Payload& src);

// Dense GF(2) matrix, rows packed into 64-bit words. All elimination-style
// work (rank, solving, erasure decoding) funnels through this type; the
// byte-oriented FieldMatrix below converts on demand.
class BinaryMatrix {
 public:
  BinaryMatrix() : rows_(0), cols_(0), wpr_(0) {}
  BinaryMatrix(size_t rows, size_t cols);

  // Entries drawn Bernoulli(1/2) from a seeded stream.
  static BinaryMatrix random(size_t rows, size_t cols, uint64_t seed);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  bool get(size_t r, size_t c) const {
    return (w_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(size_t r, size_t c, bool v) {
    uint64_t& w = w_[r * wpr_ + c / 64];
    uint64_t m = 1ull << (c % 64);
    w = v ? (w | m) : (w & ~m);
  }

  uint64_t* row(size_t r) { return w_.data() + r * wpr_; }
  const uint64_t* row(size_t r) const { return w_.data() + r * wpr_; }
  size_t words_per_row() const { return wpr_; }

  void row_xor(size_t dst, size_t src);
  void swap_rows(size_t a, size_t b);
  size_t row_weight(size_t r) const;
  // Weight of row r restricted to the columns set in mask (wpr_ words).
  size_t row_weight_masked(size_t r, const uint64_t* mask) const;
  // Column index of the single set bit of row r under mask; row must have
  // masked weight one.
  size_t masked_leading_col(size_t r, const uint64_t* mask) const;

  // Rank by forward elimination on a scratch copy.
  size_t rank() const;

 private:
  size_t rows_, cols_, wpr_;
  std::vector<uint64_t> w_;
};

// Result of solving a binary system with symbol payloads as parallel
// right-hand sides. On a rank-deficient system `values`/`determined` still
// describe every variable whose value is pinned by the received equations.
struct Gf2Solution {
  bool success = false;
  size_t rank = 0;
  std::vector<Payload> values;       // size = unknown count; zeroed when not determined
  std::vector<uint8_t> determined;   // 0/1 per unknown
};

// Gauss-Jordan elimination of an n x k system (rows = equations). Pivoting
// is deterministic: columns in natural order, first remaining row with a
// nonzero entry. rhs holds one payload per equation and receives the same
// row operations.
Gf2Solution gf2_solve(BinaryMatrix system, std::vector<Payload> rhs);

// Outcome of an erasure-filling pass (precode decoders): positions still
// unknown afterwards, ascending. success == residual.empty().
struct EraseResult {
  bool success = false;
  std::vector<uint32_t> residual;
};

// Dense matrix over GF(2) or GF(2^8); entries stored as bytes row-major.
class FieldMatrix {
 public:
  FieldMatrix() : rows_(0), cols_(0), q_(2) {}
  FieldMatrix(size_t rows, size_t cols, unsigned q);

  static FieldMatrix random(size_t rows, size_t cols, unsigned q, uint64_t seed);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  unsigned q() const { return q_; }

  uint8_t get(size_t r, size_t c) const { return a_[r * cols_ + c]; }
  void set(size_t r, size_t c, uint8_t v);

  BinaryMatrix to_binary() const;  // q == 2 only

 private:
  size_t rows_, cols_;
  unsigned q_;
  std::vector<uint8_t> a_;
};

size_t mat_rank(const FieldMatrix& m);

struct MatSolveResult {
  bool success = false;
  size_t rank = 0;
  std::vector<Payload> solution;  // one payload per column on success
};

// Solve m * x = rhs for x, one payload per matrix row in rhs. Requires
// rows >= cols; payload bytes are treated as parallel right-hand sides
// (GF(2): XOR; GF(2^8): full field ops per byte).
MatSolveResult mat_solve(const FieldMatrix& m, const std::vector<Payload>& rhs);

}  // namespace fountain

#include "fountain/matrix.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "fountain/galois.hpp"
#include "fountain/rng.hpp"

namespace fountain {

void xor_into(Payload& dst, const Payload& src) {
  if (dst.size() != src.size()) throw std::invalid_argument("xor_into: size mismatch");
  for (size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

BinaryMatrix::BinaryMatrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), w_(rows * wpr_, 0) {}

BinaryMatrix BinaryMatrix::random(size_t rows, size_t cols, uint64_t seed) {
  BinaryMatrix m(rows, cols);
  SplitMix rng(seed);
  for (size_t r = 0; r < rows; ++r) {
    uint64_t* w = m.row(r);
    for (size_t i = 0; i < m.wpr_; ++i) w[i] = rng.next();
    // clear bits past the last column
    size_t tail = cols % 64;
    if (tail) w[m.wpr_ - 1] &= (1ull << tail) - 1;
  }
  return m;
}

void BinaryMatrix::row_xor(size_t dst, size_t src) {
  uint64_t* d = row(dst);
  const uint64_t* s = row(src);
  for (size_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
}

void BinaryMatrix::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  uint64_t* x = row(a);
  uint64_t* y = row(b);
  for (size_t i = 0; i < wpr_; ++i) std::swap(x[i], y[i]);
}

size_t BinaryMatrix::row_weight(size_t r) const {
  size_t n = 0;
  const uint64_t* w = row(r);
  for (size_t i = 0; i < wpr_; ++i) n += std::popcount(w[i]);
  return n;
}

size_t BinaryMatrix::row_weight_masked(size_t r, const uint64_t* mask) const {
  size_t n = 0;
  const uint64_t* w = row(r);
  for (size_t i = 0; i < wpr_; ++i) n += std::popcount(w[i] & mask[i]);
  return n;
}

size_t BinaryMatrix::masked_leading_col(size_t r, const uint64_t* mask) const {
  const uint64_t* w = row(r);
  for (size_t i = 0; i < wpr_; ++i) {
    uint64_t v = w[i] & mask[i];
    if (v) return i * 64 + static_cast<size_t>(std::countr_zero(v));
  }
  throw std::logic_error("masked_leading_col: empty row");
}

size_t BinaryMatrix::rank() const {
  BinaryMatrix m = *this;
  size_t r = 0;
  for (size_t c = 0; c < m.cols_ && r < m.rows_; ++c) {
    size_t piv = r;
    while (piv < m.rows_ && !m.get(piv, c)) ++piv;
    if (piv == m.rows_) continue;
    m.swap_rows(r, piv);
    for (size_t i = piv + 1; i < m.rows_; ++i)
      if (m.get(i, c)) m.row_xor(i, r);
    ++r;
  }
  return r;
}

Gf2Solution gf2_solve(BinaryMatrix system, std::vector<Payload> rhs) {
  const size_t n = system.rows();
  const size_t k = system.cols();
  if (rhs.size() != n) throw std::invalid_argument("gf2_solve: rhs count != rows");

  std::vector<size_t> pivot_col;  // per pivot row, in order
  std::vector<size_t> col_pivot_row(k, SIZE_MAX);
  size_t r = 0;
  for (size_t c = 0; c < k && r < n; ++c) {
    size_t piv = r;
    while (piv < n && !system.get(piv, c)) ++piv;
    if (piv == n) continue;
    system.swap_rows(r, piv);
    std::swap(rhs[r], rhs[piv]);
    for (size_t i = 0; i < n; ++i) {
      if (i != r && system.get(i, c)) {
        system.row_xor(i, r);
        xor_into(rhs[i], rhs[r]);
      }
    }
    col_pivot_row[c] = r;
    pivot_col.push_back(c);
    ++r;
  }

  Gf2Solution out;
  out.rank = r;
  out.success = (r == k);
  out.values.assign(k, Payload());
  out.determined.assign(k, 0);
  size_t sym = rhs.empty() ? 0 : rhs[0].size();
  for (size_t c = 0; c < k; ++c) {
    size_t pr = col_pivot_row[c];
    if (pr == SIZE_MAX) {
      out.values[c].assign(sym, 0);
      continue;  // free variable
    }
    // Determined iff the reduced pivot row touches no free column.
    bool det = (system.row_weight(pr) == 1);
    out.determined[c] = det ? 1 : 0;
    out.values[c] = det ? rhs[pr] : Payload(sym, 0);
  }
  return out;
}

FieldMatrix::FieldMatrix(size_t rows, size_t cols, unsigned q)
    : rows_(rows), cols_(cols), q_(q), a_(rows * cols, 0) {
  if (q != 2 && q != 256) throw std::invalid_argument("FieldMatrix: q must be 2 or 256");
}

void FieldMatrix::set(size_t r, size_t c, uint8_t v) {
  if (q_ == 2 && v > 1) throw std::invalid_argument("FieldMatrix: entry out of field");
  a_[r * cols_ + c] = v;
}

FieldMatrix FieldMatrix::random(size_t rows, size_t cols, unsigned q, uint64_t seed) {
  FieldMatrix m(rows, cols, q);
  SplitMix rng(seed);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      m.a_[r * cols + c] = static_cast<uint8_t>(rng.below(q));
  return m;
}

BinaryMatrix FieldMatrix::to_binary() const {
  if (q_ != 2) throw std::invalid_argument("to_binary: matrix is not over GF(2)");
  BinaryMatrix b(rows_, cols_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c)
      if (a_[r * cols_ + c]) b.set(r, c, true);
  return b;
}

static size_t gf256_rank(FieldMatrix m) {
  size_t r = 0;
  const size_t rows = m.rows(), cols = m.cols();
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m.get(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    for (size_t j = 0; j < cols; ++j) {
      uint8_t t = m.get(r, j);
      m.set(r, j, m.get(piv, j));
      m.set(piv, j, t);
    }
    uint8_t s = gf256::inv_unchecked(m.get(r, c));
    for (size_t i = r + 1; i < rows; ++i) {
      uint8_t f = m.get(i, c);
      if (!f) continue;
      uint8_t fs = gf256::mul(f, s);
      for (size_t j = c; j < cols; ++j)
        m.set(i, j, m.get(i, j) ^ gf256::mul(fs, m.get(r, j)));
    }
    ++r;
  }
  return r;
}

size_t mat_rank(const FieldMatrix& m) {
  if (m.q() == 2) return m.to_binary().rank();
  return gf256_rank(m);
}

static MatSolveResult gf256_solve(const FieldMatrix& in, std::vector<Payload> rhs) {
  const size_t n = in.rows(), k = in.cols();
  FieldMatrix m = in;
  std::vector<size_t> col_pivot_row(k, SIZE_MAX);
  size_t r = 0;
  for (size_t c = 0; c < k && r < n; ++c) {
    size_t piv = r;
    while (piv < n && m.get(piv, c) == 0) ++piv;
    if (piv == n) continue;
    for (size_t j = 0; j < k; ++j) {
      uint8_t t = m.get(r, j);
      m.set(r, j, m.get(piv, j));
      m.set(piv, j, t);
    }
    std::swap(rhs[r], rhs[piv]);
    // scale pivot row to leading 1
    uint8_t s = gf256::inv_unchecked(m.get(r, c));
    if (s != 1) {
      for (size_t j = 0; j < k; ++j) m.set(r, j, gf256::mul(s, m.get(r, j)));
      for (auto& b : rhs[r]) b = gf256::mul(s, b);
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      uint8_t f = m.get(i, c);
      if (!f) continue;
      for (size_t j = 0; j < k; ++j)
        m.set(i, j, m.get(i, j) ^ gf256::mul(f, m.get(r, j)));
      for (size_t b = 0; b < rhs[i].size(); ++b)
        rhs[i][b] ^= gf256::mul(f, rhs[r][b]);
    }
    col_pivot_row[c] = r;
    ++r;
  }
  MatSolveResult out;
  out.rank = r;
  out.success = (r == k);
  if (out.success) {
    out.solution.resize(k);
    for (size_t c = 0; c < k; ++c) out.solution[c] = rhs[col_pivot_row[c]];
  }
  return out;
}

MatSolveResult mat_solve(const FieldMatrix& m, const std::vector<Payload>& rhs) {
  if (m.rows() < m.cols()) throw std::invalid_argument("mat_solve: underdetermined system");
  if (rhs.size() != m.rows()) throw std::invalid_argument("mat_solve: rhs count != rows");
  for (const auto& p : rhs)
    if (p.size() != rhs[0].size()) throw std::invalid_argument("mat_solve: ragged rhs");

  if (m.q() == 2) {
    Gf2Solution s = gf2_solve(m.to_binary(), rhs);
    MatSolveResult out;
    out.rank = s.rank;
    out.success = s.success;
    if (s.success) out.solution = std::move(s.values);
    return out;
  }
  return gf256_solve(m, rhs);
}

}  // namespace fountain

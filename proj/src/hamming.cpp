#include "fountain/hamming.hpp"

#include <algorithm>
#include <stdexcept>

namespace fountain {

HammingCode hamming_build(uint32_t r, bool extended) {
  if (r < 2 || r > 30) throw std::invalid_argument("hamming_build: need 2 <= r <= 30");
  HammingCode c;
  c.r = r;
  c.extended = extended;
  const uint32_t base = (1u << r) - 1;
  c.n = extended ? base + 1 : base;
  c.H = FieldMatrix(extended ? r + 1 : r, c.n, 2);
  for (uint32_t j = 0; j < base; ++j)
    for (uint32_t i = 0; i < r; ++i)
      if ((j + 1) >> (r - 1 - i) & 1u) c.H.set(i, j, 1);
  if (extended)
    for (uint32_t j = 0; j < c.n; ++j) c.H.set(r, j, 1);
  return c;
}

EraseResult hamming_erase_decode(const HammingCode& c, std::vector<Payload>& word,
                                 std::vector<uint8_t>& known) {
  if (word.size() != c.n || known.size() != c.n)
    throw std::invalid_argument("hamming_erase_decode: word length must be n");
  std::vector<uint32_t> erased;
  size_t payload_size = 0;
  for (uint32_t j = 0; j < c.n; ++j) {
    if (known[j])
      payload_size = word[j].size();
    else
      erased.push_back(j);
  }
  EraseResult res;
  if (erased.empty()) {
    res.success = true;
    return res;
  }

  const size_t rows = c.H.rows();
  BinaryMatrix sys(rows, erased.size());
  std::vector<Payload> rhs(rows, Payload(payload_size, 0));
  for (size_t i = 0; i < rows; ++i)
    for (uint32_t j = 0; j < c.n; ++j) {
      if (!c.H.get(i, j)) continue;
      if (known[j])
        xor_into(rhs[i], word[j]);
      else
        sys.set(i, std::lower_bound(erased.begin(), erased.end(), j) - erased.begin(), true);
    }

  Gf2Solution sol = gf2_solve(std::move(sys), std::move(rhs));
  for (size_t e = 0; e < erased.size(); ++e) {
    if (!sol.determined[e]) {
      res.residual.push_back(erased[e]);
      continue;
    }
    word[erased[e]] = std::move(sol.values[e]);
    known[erased[e]] = 1;
  }
  res.success = res.residual.empty();
  return res;
}

mpz_class count_correctable(uint32_t r, uint32_t tau) {
  if (tau < 1 || tau > r)
    throw std::invalid_argument("count_correctable: need 1 <= tau <= r");
  mpz_class b = 1;
  const mpz_class top = mpz_class(1) << r;
  for (uint32_t i = 0; i < tau; ++i) {
    b *= top - (mpz_class(1) << i);
    b /= i + 1;  // exact at every step: b is a basis count times i!/(i+1)!
  }
  return b;
}

std::vector<mpz_class> hamming_g_coefficients(uint32_t r) {
  std::vector<mpz_class> coeffs;
  coeffs.reserve(r);
  for (uint32_t tau = 1; tau <= r; ++tau) coeffs.push_back(count_correctable(r, tau));
  return coeffs;
}

double hamming_g(double s, uint32_t r) {
  const auto coeffs = hamming_g_coefficients(r);
  double acc = 0;
  for (uint32_t tau = r; tau >= 1; --tau) acc = acc * s + coeffs[tau - 1].get_d();
  return acc * s;
}

}  // namespace fountain

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "fountain/matrix.hpp"

namespace fountain {

// Binary Hamming code of length 2^r-1 described by its parity-check matrix,
// or the extended variant of length 2^r with an extra overall-parity row.
struct HammingCode {
  uint32_t r = 0;
  bool extended = false;
  uint32_t n = 0;
  FieldMatrix H;  // (r [+1]) x n over GF(2); column j is the binary expansion of j+1
};

HammingCode hamming_build(uint32_t r, bool extended);

// Fill erased positions of a codeword by solving H restricted to the erased
// columns. Fills (and marks known) every determined position, so a failed
// call may still narrow the erasure set. word and known have length c.n.
EraseResult hamming_erase_decode(const HammingCode& c, std::vector<Payload>& word,
                                 std::vector<uint8_t>& known);

// B(tau, r): how many weight-tau erasure patterns the length-(2^r-1) code
// corrects, i.e. the number of linearly independent tau-subsets of H's
// columns: (1/tau!)*prod_{i<tau}(2^r - 2^i).
mpz_class count_correctable(uint32_t r, uint32_t tau);

// Coefficients B(1,r)..B(r,r) of the correctable-pattern generator
// polynomial g(s,r), and its evaluation.
std::vector<mpz_class> hamming_g_coefficients(uint32_t r);
double hamming_g(double s, uint32_t r);

}  // namespace fountain

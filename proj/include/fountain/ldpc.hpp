#pragma once

#include <cstdint>
#include <vector>

#include "fountain/matrix.hpp"

namespace fountain {

// (l,r)-regular Gallager-ensemble LDPC code: n*l variable sockets matched to
// check sockets by a seeded uniform permutation. Multi-edges collapse to
// single entries of H; collapsed_edges records how many were lost, so row
// and column weights are <= r and <= l respectively.
struct LdpcCode {
  uint32_t n = 0;
  uint32_t l = 0;
  uint32_t r = 0;
  uint64_t seed = 0;
  FieldMatrix H;  // (n*l/r) x n over GF(2)
  uint32_t collapsed_edges = 0;
};

LdpcCode ldpc_build(uint32_t n, uint32_t l, uint32_t r, uint64_t seed);

// Peeling erasure decoder: repeatedly take a check with exactly one erased
// neighbor and solve for it. A stalled residual is a stopping set — every
// check touches it zero or >= 2 times.
EraseResult ldpc_erase_decode(const LdpcCode& c, std::vector<Payload>& word,
                              std::vector<uint8_t>& known);

}  // namespace fountain

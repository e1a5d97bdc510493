#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fountain/dist.hpp"
#include "fountain/matrix.hpp"

namespace fountain {

// Everything an encoder or decoder needs to agree on. The distribution is
// shared because several parameter blocks (plain LT, concatenated codes,
// simulation configs) typically reference one instance.
struct CodeParams {
  uint32_t k = 0;
  uint32_t symbol_size = 0;
  std::shared_ptr<const DegreeDistribution> dist;
  uint64_t base_seed = 0;

  void validate() const;  // k >= 1, symbol_size >= 1, dist targets k
};

struct EncodingSymbol {
  uint32_t esi = 0;
  Payload payload;
};

enum class DecodeStatus { Success, Stalled };

struct DecodeReport {
  DecodeStatus status = DecodeStatus::Stalled;
  // Recovered symbol values, always sized k; entries for unrecovered
  // indices are zero. Valid as the message exactly when status == Success.
  std::vector<Payload> symbols;
  uint32_t recovered_count = 0;
  std::vector<uint32_t> ripple_trace;   // ripple size at the start of each peeling iteration
  std::vector<uint32_t> release_trace;  // checks dropping to degree one during each iteration
  std::vector<uint32_t> unrecovered;    // ascending source indices
  std::vector<uint32_t> recovered_order;  // source indices in recovery order (peeled, then solved)
  uint32_t inactivation_count = 0;      // inactivation decoder only
  std::vector<uint32_t> inactivated;    // variable indices chosen for inactivation
  uint32_t rank = 0;                    // achieved rank (ML/inactivation decoders)

  const std::vector<Payload>& message() const;  // requires Success
};

// Neighbor set of an encoding symbol: the per-symbol stream seeded by
// (base_seed, esi) first draws the degree through the distribution's CDF,
// then draws a uniform degree-sized subset of {0..k-1} with Floyd's
// algorithm. Returned ascending.
std::vector<uint32_t> lt_neighbors(const CodeParams& p, uint32_t esi);

// XOR of the message payloads selected by lt_neighbors.
EncodingSymbol lt_encode(const CodeParams& p, uint32_t esi,
                         const std::vector<Payload>& message);

// G as a k x n GF(2) matrix; column j is the indicator vector of
// lt_neighbors(esis[j]).
FieldMatrix lt_generator_matrix(const CodeParams& p, const std::vector<uint32_t>& esis);

// Neighbor lists and payloads of a batch of received symbols, ordered by
// ascending ESI. Rejects duplicate ESIs and payload size mismatches. All
// decoders consume this form, so "smallest ESI" and "smallest check index"
// coincide.
std::pair<std::vector<std::vector<uint32_t>>, std::vector<Payload>> expand_received(
    const CodeParams& p, const std::vector<EncodingSymbol>& received);

// Peeling decoder over explicit neighbor lists (one per received check).
// Exposed separately so hand-built graphs and the concatenated decoder can
// reuse it without synthesizing ESIs.
DecodeReport bp_peel(uint32_t k, const std::vector<std::vector<uint32_t>>& checks,
                     std::vector<Payload> values);

// Peeling decoder for LT symbols: repeatedly take the degree-one check with
// the smallest ESI, assign its remaining neighbor, and XOR it out of the
// graph. Duplicate ESIs are rejected.
DecodeReport bp_decode(const CodeParams& p, const std::vector<EncodingSymbol>& received);

}  // namespace fountain

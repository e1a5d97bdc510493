#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fountain/hamming.hpp"
#include "fountain/ldpc.hpp"
#include "fountain/lt.hpp"

namespace fountain {

enum class PrecodeKind { None, Hamming, Ldpc };

struct PrecodeSpec {
  PrecodeKind kind = PrecodeKind::None;
  uint32_t hamming_r = 0;
  bool hamming_extended = false;
  uint32_t ldpc_n = 0;
  uint32_t ldpc_l = 0;
  uint32_t ldpc_r = 0;
  uint64_t ldpc_seed = 0;
};

// Plain-text form: `type=hamming r=<int> extended=<0|1>` or
// `type=ldpc n=<int> l=<int> r=<int> seed=<u64>`.
PrecodeSpec parse_precode_spec(const std::string& text);
std::string format_precode_spec(const PrecodeSpec& s);
PrecodeSpec load_precode_file(const std::string& path);

// Intermediate symbol count k' for k message symbols: k + r (+1 extended)
// under a Hamming precode, the block length n under LDPC, k with none.
uint32_t intermediate_length(uint32_t k, const PrecodeSpec& s);

struct ConcatParams {
  uint32_t k = 0;
  PrecodeSpec precode;
  CodeParams lt;  // targets the intermediate length k'
  bool systematic = false;

  void validate() const;
};

// BP-decodable generator graph for the systematic construction: k checks
// over k variables, wired so that peeling (with every check value known)
// recovers exactly one variable per iteration.
struct GstarGraph {
  uint32_t k = 0;
  std::vector<std::vector<uint32_t>> checks;  // ascending neighbor lists
  std::vector<uint32_t> degrees;              // degree drawn for each check
  uint32_t retries = 0;                       // Step 1 redraws consumed
};

// Step 1 Check: the sorted degree vector satisfies d_(i) <= i.
bool gstar_degree_check(std::vector<uint32_t> degrees);

GstarGraph gstar_build(uint32_t k, const DegreeDistribution& dist, uint64_t seed);

// Probability that degrees {1, 2} plus k-2 fresh draws from dist pass the
// Step 1 Check: exact threshold DP, and a Monte Carlo cross-check.
double gstar_feasibility(uint32_t k, const DegreeDistribution& dist);
double gstar_feasibility_mc(uint32_t k, const DegreeDistribution& dist, uint32_t trials,
                            uint64_t seed);

// Seed of the G* construction stream, derived from the LT stream seed so a
// decoder can rebuild the identical graph from packet headers alone.
uint64_t gstar_seed(uint64_t base_seed);

class ConcatEncoder {
 public:
  ConcatEncoder(ConcatParams cp, std::vector<Payload> message);

  // Lazily encodable for any ESI. Systematic streams emit the message
  // verbatim for ESI < k and fresh LT symbols over the intermediates above.
  EncodingSymbol symbol(uint32_t esi) const;

  const ConcatParams& params() const { return cp_; }
  const std::vector<Payload>& intermediates() const { return z_; }
  const GstarGraph* gstar() const { return gstar_ ? &*gstar_ : nullptr; }

 private:
  ConcatParams cp_;
  std::vector<Payload> message_;
  std::vector<Payload> z_;
  std::optional<GstarGraph> gstar_;
};

// Staged decoding: solve the intermediates from the received equations
// (inactivation by default, plain peeling otherwise), re-derive data symbols
// through the encoding relations, then let the precode fill residual gaps.
// The report speaks in message coordinates; rank/inactivation fields carry
// over from the intermediate solve.
DecodeReport concat_decode(const ConcatParams& cp, const std::vector<EncodingSymbol>& received,
                           bool use_inactivation = true);

}  // namespace fountain

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fountain/concat.hpp"
#include "fountain/dist.hpp"
#include "fountain/lt.hpp"

namespace fountain {

// Binary erasure channel: each symbol is dropped i.i.d. with probability
// epsilon0, survivors keep their ESIs.
struct ChannelConfig {
  double epsilon0 = 0.0;
  uint64_t seed = 0;
};

std::vector<EncodingSymbol> bec_transmit(const std::vector<EncodingSymbol>& symbols,
                                         const ChannelConfig& ch);

enum class DecoderKind { Bp, Ml, Inactivation };

const char* decoder_name(DecoderKind kind);

struct ExperimentRecord {
  uint32_t k = 0;
  double overhead = 0.0;
  DecoderKind decoder = DecoderKind::Bp;
  uint32_t trials = 0;
  uint32_t failures = 0;
  double failure_rate = 0.0;
  double lo = 0.0;  // Wilson 95% interval
  double hi = 1.0;
};

// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(uint32_t failures, uint32_t trials);

struct CurveConfig {
  ConcatParams params;
  std::vector<double> overheads;
  DecoderKind decoder = DecoderKind::Bp;
  uint32_t trials = 1;
  double channel_epsilon0 = 0.0;
};

// One record per overhead point; trial (pi, t) is seeded by
// derive_seed(base_seed, pi, t) so results are independent of evaluation
// order.
std::vector<ExperimentRecord> run_curve(const CurveConfig& cfg, uint64_t base_seed);

// CSV with header k,overhead,decoder,trials,failures,rate,lo,hi.
std::string experiment_csv(const std::vector<ExperimentRecord>& records);

// Mean BP-unrecovered fraction of k input symbols when (1+epsilon)k encoding
// symbols are received intact.
double unrecovered_fraction_experiment(const DegreeDistribution& d, uint32_t k, double epsilon,
                                       uint32_t trials, uint64_t seed);

// Release-rate experiment under the idealized decoder of the analysis: input
// symbols are processed in a uniformly random order and element i of the
// result is the mean number of encoding symbols whose unprocessed degree
// drops to one at step i.
std::vector<double> release_rate_experiment(const DegreeDistribution& d, uint32_t k, uint32_t n,
                                            uint32_t trials, uint64_t seed);

}  // namespace fountain

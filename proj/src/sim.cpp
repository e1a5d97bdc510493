#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <utility>

#include "fountain/mldec.hpp"
#include "fountain/rng.hpp"
#include "fountain/sim.hpp"

namespace fountain {

std::vector<EncodingSymbol> bec_transmit(const std::vector<EncodingSymbol>& symbols,
                                         const ChannelConfig& ch) {
  if (!(ch.epsilon0 >= 0.0 && ch.epsilon0 <= 1.0))
    throw std::invalid_argument("bec_transmit: epsilon0 must lie in [0,1]");
  SplitMix rng(ch.seed);
  std::vector<EncodingSymbol> out;
  out.reserve(symbols.size());
  for (const EncodingSymbol& s : symbols)
    if (!rng.coin(ch.epsilon0)) out.push_back(s);
  return out;
}

const char* decoder_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::Bp:
      return "bp";
    case DecoderKind::Ml:
      return "ml";
    default:
      return "inactivation";
  }
}

std::pair<double, double> wilson_interval(uint32_t failures, uint32_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be positive");
  if (failures > trials) throw std::invalid_argument("wilson_interval: failures exceed trials");
  const double z = 1.959963984540054;
  const double t = trials;
  const double p = failures / t;
  const double denom = 1.0 + z * z / t;
  const double center = (p + z * z / (2.0 * t)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / t + z * z / (4.0 * t * t)) / denom;
  // the interval provably contains p; keep rounding from nudging it off
  return {std::min(p, std::max(0.0, center - half)), std::max(p, std::min(1.0, center + half))};
}

std::vector<ExperimentRecord> run_curve(const CurveConfig& cfg, uint64_t base_seed) {
  if (cfg.trials == 0) throw std::invalid_argument("run_curve: trials must be positive");
  cfg.params.validate();
  const uint32_t k = cfg.params.k;
  const bool plain =
      cfg.params.precode.kind == PrecodeKind::None && !cfg.params.systematic;

  std::vector<ExperimentRecord> records;
  records.reserve(cfg.overheads.size());
  for (size_t pi = 0; pi < cfg.overheads.size(); ++pi) {
    const double ov = cfg.overheads[pi];
    const long long ns = std::llround((1.0 + ov) * k);
    const uint32_t n_sent = ns < 0 ? 0u : static_cast<uint32_t>(ns);

    uint32_t failures = 0;
    for (uint32_t t = 0; t < cfg.trials; ++t) {
      const uint64_t tseed = derive_seed(base_seed, pi, t);
      ConcatParams p = cfg.params;
      p.lt.base_seed = derive_seed(tseed, 0);

      std::vector<Payload> message(k, Payload(cfg.params.lt.symbol_size));
      SplitMix mrng(derive_seed(tseed, 2));
      for (Payload& sym : message)
        for (uint8_t& b : sym) b = static_cast<uint8_t>(mrng.next());

      ConcatEncoder enc(p, message);
      std::vector<EncodingSymbol> sent;
      sent.reserve(n_sent);
      for (uint32_t esi = 0; esi < n_sent; ++esi) sent.push_back(enc.symbol(esi));
      const std::vector<EncodingSymbol> got =
          bec_transmit(sent, ChannelConfig{cfg.channel_epsilon0, derive_seed(tseed, 1)});

      DecodeStatus status;
      if (plain) {
        const DecodeReport rep = cfg.decoder == DecoderKind::Bp ? bp_decode(p.lt, got)
                                 : cfg.decoder == DecoderKind::Ml
                                     ? ml_decode(p.lt, got)
                                     : inactivation_decode(p.lt, got);
        status = rep.status;
      } else {
        const DecodeReport rep = concat_decode(p, got, cfg.decoder != DecoderKind::Bp);
        status = rep.status;
      }
      if (status != DecodeStatus::Success) ++failures;
    }

    ExperimentRecord rec;
    rec.k = k;
    rec.overhead = ov;
    rec.decoder = cfg.decoder;
    rec.trials = cfg.trials;
    rec.failures = failures;
    rec.failure_rate = double(failures) / cfg.trials;
    std::tie(rec.lo, rec.hi) = wilson_interval(failures, cfg.trials);
    records.push_back(rec);
  }
  return records;
}

std::string experiment_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "k,overhead,decoder,trials,failures,rate,lo,hi\n";
  char buf[256];
  for (const ExperimentRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%u,%.10g,%s,%u,%u,%.10g,%.10g,%.10g\n", r.k, r.overhead,
                  decoder_name(r.decoder), r.trials, r.failures, r.failure_rate, r.lo, r.hi);
    out += buf;
  }
  return out;
}

double unrecovered_fraction_experiment(const DegreeDistribution& d, uint32_t k, double epsilon,
                                       uint32_t trials, uint64_t seed) {
  if (k == 0) throw std::invalid_argument("unrecovered_fraction_experiment: k must be positive");
  if (trials == 0)
    throw std::invalid_argument("unrecovered_fraction_experiment: trials must be positive");
  const long long ns = std::llround((1.0 + epsilon) * k);
  const uint32_t n = ns < 0 ? 0u : static_cast<uint32_t>(ns);
  auto dist = std::make_shared<DegreeDistribution>(d.with_k(k));

  double acc = 0.0;
  for (uint32_t t = 0; t < trials; ++t) {
    CodeParams p{k, 1, dist, derive_seed(seed, t)};
    const std::vector<Payload> zeros(k, Payload(1, 0));
    std::vector<EncodingSymbol> got;
    got.reserve(n);
    for (uint32_t esi = 0; esi < n; ++esi) got.push_back(lt_encode(p, esi, zeros));
    const DecodeReport rep = bp_decode(p, got);
    acc += double(k - rep.recovered_count) / k;
  }
  return acc / trials;
}

std::vector<double> release_rate_experiment(const DegreeDistribution& d, uint32_t k, uint32_t n,
                                            uint32_t trials, uint64_t seed) {
  if (k == 0 || trials == 0)
    throw std::invalid_argument("release_rate_experiment: k and trials must be positive");
  auto dist = std::make_shared<DegreeDistribution>(d.with_k(k));
  std::vector<double> releases(k, 0.0);

  for (uint32_t t = 0; t < trials; ++t) {
    CodeParams p{k, 1, dist, derive_seed(seed, t, 1)};
    std::vector<uint32_t> deg(n);
    std::vector<std::vector<uint32_t>> incident(k);
    for (uint32_t j = 0; j < n; ++j) {
      const std::vector<uint32_t> nb = lt_neighbors(p, j);
      deg[j] = static_cast<uint32_t>(nb.size());
      for (uint32_t v : nb) incident[v].push_back(j);
    }
    // Uniform processing order stands in for the decoder's choices.
    std::vector<uint32_t> perm(k);
    for (uint32_t i = 0; i < k; ++i) perm[i] = i;
    SplitMix prng(derive_seed(seed, t, 2));
    for (uint32_t i = k - 1; i > 0; --i) {
      const uint32_t j = static_cast<uint32_t>(prng.below(i + 1));
      std::swap(perm[i], perm[j]);
    }
    for (uint32_t i = 0; i < k; ++i) {
      uint32_t count = 0;
      for (uint32_t c : incident[perm[i]])
        if (--deg[c] == 1) ++count;
      releases[i] += count;
    }
  }
  for (double& v : releases) v /= trials;
  return releases;
}

}  // namespace fountain

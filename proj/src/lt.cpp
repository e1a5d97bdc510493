#include "fountain/lt.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "fountain/rng.hpp"

namespace fountain {

void CodeParams::validate() const {
  if (k == 0) throw std::invalid_argument("CodeParams: k must be positive");
  if (symbol_size == 0) throw std::invalid_argument("CodeParams: symbol_size must be positive");
  if (!dist) throw std::invalid_argument("CodeParams: no degree distribution");
  if (dist->k() != k)
    throw std::invalid_argument("CodeParams: distribution targets k=" +
                                std::to_string(dist->k()) + ", code has k=" + std::to_string(k));
  if (dist->dmax() > k)
    throw std::invalid_argument("CodeParams: distribution degree exceeds k");
}

const std::vector<Payload>& DecodeReport::message() const {
  if (status != DecodeStatus::Success)
    throw std::logic_error("DecodeReport::message: decoding did not succeed");
  return symbols;
}

std::vector<uint32_t> lt_neighbors(const CodeParams& p, uint32_t esi) {
  p.validate();
  SplitMix rng(p.base_seed, esi);
  const uint32_t d = p.dist->sample_degree(rng.uniform());

  // Floyd's uniform d-subset of {0..k-1}; a std::set keeps it ascending.
  std::set<uint32_t> picked;
  for (uint32_t j = p.k - d; j < p.k; ++j) {
    const uint64_t t = rng.below(j + 1);
    if (!picked.insert(static_cast<uint32_t>(t)).second) picked.insert(j);
  }
  return {picked.begin(), picked.end()};
}

EncodingSymbol lt_encode(const CodeParams& p, uint32_t esi,
                         const std::vector<Payload>& message) {
  if (message.size() != p.k)
    throw std::invalid_argument("lt_encode: message has wrong number of source symbols");
  EncodingSymbol out;
  out.esi = esi;
  out.payload.assign(p.symbol_size, 0);
  for (uint32_t v : lt_neighbors(p, esi)) {
    if (message[v].size() != p.symbol_size)
      throw std::invalid_argument("lt_encode: source symbol size mismatch");
    xor_into(out.payload, message[v]);
  }
  return out;
}

FieldMatrix lt_generator_matrix(const CodeParams& p, const std::vector<uint32_t>& esis) {
  FieldMatrix g(p.k, esis.size(), 2);
  for (size_t j = 0; j < esis.size(); ++j)
    for (uint32_t v : lt_neighbors(p, esis[j])) g.set(v, j, 1);
  return g;
}

DecodeReport bp_peel(uint32_t k, const std::vector<std::vector<uint32_t>>& checks,
                     std::vector<Payload> values) {
  if (values.size() != checks.size())
    throw std::invalid_argument("bp_peel: one value per check required");
  const size_t n = checks.size();
  const size_t payload_size = values.empty() ? 0 : values[0].size();

  // Per check: count and XOR-accumulator of unresolved neighbors. The
  // accumulator names the last neighbor outright once the count hits one.
  std::vector<uint32_t> deg(n, 0);
  std::vector<uint32_t> acc(n, 0);
  std::vector<std::vector<uint32_t>> var_checks(k);
  for (size_t c = 0; c < n; ++c) {
    if (values[c].size() != payload_size)
      throw std::invalid_argument("bp_peel: check values must share one size");
    // Repeated neighbors cancel over GF(2).
    auto nb = checks[c];
    std::sort(nb.begin(), nb.end());
    size_t w = 0;
    for (size_t r = 0; r < nb.size();) {
      if (nb[r] >= k) throw std::invalid_argument("bp_peel: neighbor out of range");
      size_t run = r;
      while (run < nb.size() && nb[run] == nb[r]) ++run;
      if ((run - r) % 2) nb[w++] = nb[r];
      r = run;
    }
    nb.resize(w);
    deg[c] = static_cast<uint32_t>(nb.size());
    for (uint32_t v : nb) {
      acc[c] ^= v;
      var_checks[v].push_back(static_cast<uint32_t>(c));
    }
  }

  DecodeReport rep;
  rep.symbols.assign(k, Payload());
  std::vector<uint8_t> determined(k, 0);

  // Checks of degree one, smallest index first. Stale entries (degree
  // meanwhile dropped to zero) are discarded on pop.
  std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<>> ready;
  uint32_t ripple = 0;
  for (size_t c = 0; c < n; ++c) {
    if (deg[c] != 1) continue;
    ready.push(static_cast<uint32_t>(c));
    const uint32_t v = acc[c];
    if (!determined[v]) {
      determined[v] = 1;
      rep.symbols[v] = values[c];
      ++ripple;
    }
  }

  while (!ready.empty()) {
    const uint32_t c = ready.top();
    ready.pop();
    if (deg[c] != 1) continue;  // neighbor got peeled through another check
    const uint32_t v = acc[c];
    rep.ripple_trace.push_back(ripple);
    --ripple;
    uint32_t released = 0;
    for (uint32_t c2 : var_checks[v]) {
      if (deg[c2] == 0) continue;
      xor_into(values[c2], rep.symbols[v]);
      acc[c2] ^= v;
      if (--deg[c2] == 1) {
        ++released;
        ready.push(c2);
        const uint32_t u = acc[c2];
        if (!determined[u]) {
          determined[u] = 1;
          rep.symbols[u] = values[c2];
          ++ripple;
        }
      }
    }
    rep.release_trace.push_back(released);
    rep.recovered_order.push_back(v);
    ++rep.recovered_count;
  }

  for (uint32_t v = 0; v < k; ++v) {
    if (determined[v]) continue;
    rep.symbols[v].assign(payload_size, 0);
    rep.unrecovered.push_back(v);
  }
  rep.status = rep.recovered_count == k ? DecodeStatus::Success : DecodeStatus::Stalled;
  rep.rank = rep.recovered_count;
  return rep;
}

std::pair<std::vector<std::vector<uint32_t>>, std::vector<Payload>> expand_received(
    const CodeParams& p, const std::vector<EncodingSymbol>& received) {
  p.validate();
  std::vector<size_t> order(received.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return received[a].esi < received[b].esi; });
  for (size_t i = 1; i < order.size(); ++i)
    if (received[order[i]].esi == received[order[i - 1]].esi)
      throw std::invalid_argument("decode: duplicate ESI " +
                                  std::to_string(received[order[i]].esi));

  std::pair<std::vector<std::vector<uint32_t>>, std::vector<Payload>> out;
  out.first.reserve(received.size());
  out.second.reserve(received.size());
  for (size_t i : order) {
    if (received[i].payload.size() != p.symbol_size)
      throw std::invalid_argument("decode: payload size mismatch");
    out.first.push_back(lt_neighbors(p, received[i].esi));
    out.second.push_back(received[i].payload);
  }
  return out;
}

DecodeReport bp_decode(const CodeParams& p, const std::vector<EncodingSymbol>& received) {
  auto [checks, values] = expand_received(p, received);
  DecodeReport rep = bp_peel(p.k, checks, std::move(values));
  for (uint32_t v : rep.unrecovered) rep.symbols[v].assign(p.symbol_size, 0);
  return rep;
}

}  // namespace fountain

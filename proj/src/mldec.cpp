#include "fountain/mldec.hpp"

#include <bit>
#include <queue>
#include <stdexcept>

namespace fountain {
namespace {

BinaryMatrix build_system(uint32_t k, const std::vector<std::vector<uint32_t>>& checks,
                          const std::vector<Payload>& values) {
  if (values.size() != checks.size())
    throw std::invalid_argument("decode: one value per check required");
  const size_t payload_size = values.empty() ? 0 : values[0].size();
  BinaryMatrix m(checks.size(), k);
  for (size_t c = 0; c < checks.size(); ++c) {
    if (values[c].size() != payload_size)
      throw std::invalid_argument("decode: check values must share one size");
    for (uint32_t v : checks[c]) {
      if (v >= k) throw std::invalid_argument("decode: neighbor out of range");
      m.set(c, v, !m.get(c, v));  // repeated neighbors cancel
    }
  }
  return m;
}

}  // namespace

DecodeReport ml_solve(uint32_t k, const std::vector<std::vector<uint32_t>>& checks,
                      std::vector<Payload> values) {
  BinaryMatrix m = build_system(k, checks, values);
  Gf2Solution sol = gf2_solve(std::move(m), std::move(values));

  DecodeReport rep;
  rep.rank = static_cast<uint32_t>(sol.rank);
  rep.symbols = std::move(sol.values);
  for (uint32_t v = 0; v < k; ++v) {
    if (sol.determined[v])
      ++rep.recovered_count;
    else
      rep.unrecovered.push_back(v);
  }
  rep.status = rep.recovered_count == k ? DecodeStatus::Success : DecodeStatus::Stalled;
  return rep;
}

DecodeReport ml_decode(const CodeParams& p, const std::vector<EncodingSymbol>& received) {
  auto [checks, values] = expand_received(p, received);
  DecodeReport rep = ml_solve(p.k, checks, std::move(values));
  for (uint32_t v : rep.unrecovered) rep.symbols[v].assign(p.symbol_size, 0);
  return rep;
}

DecodeReport inactivation_solve(uint32_t k, const std::vector<std::vector<uint32_t>>& checks,
                                std::vector<Payload> values) {
  BinaryMatrix m = build_system(k, checks, values);
  const size_t n = checks.size();
  const size_t payload_size = values.empty() ? 0 : values[0].size();
  const size_t words = (k + 63) / 64;

  std::vector<uint64_t> active_mask(words, ~0ull);
  if (k % 64) active_mask[words - 1] = ~0ull >> (64 - k % 64);

  // var_state: 0 active, 1 paired, 2 inactivated
  std::vector<uint8_t> var_state(k, 0);
  std::vector<uint8_t> row_paired(n, 0);
  std::vector<uint32_t> active_deg(n);
  std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<>> ready;
  for (size_t c = 0; c < n; ++c) {
    active_deg[c] = static_cast<uint32_t>(m.row_weight(c));
    if (active_deg[c] == 1) ready.push(static_cast<uint32_t>(c));
  }

  std::vector<std::pair<uint32_t, uint32_t>> pairs;  // (check, var), schedule order
  std::vector<uint32_t> inactive;
  uint32_t remaining = k;

  // Pairing a check with its last active variable freezes the row; the row
  // is XORed out of every other unpaired row containing that variable, so
  // unpaired rows only ever reference unresolved variables. Each such XOR
  // lowers the target's active degree by exactly one, because a freezing row
  // carries no active variable besides the paired one.
  auto pair_up = [&](uint32_t c) {
    const uint32_t u = static_cast<uint32_t>(m.masked_leading_col(c, active_mask.data()));
    row_paired[c] = 1;
    var_state[u] = 1;
    active_deg[c] = 0;
    pairs.emplace_back(c, u);
    --remaining;
    for (size_t c2 = 0; c2 < n; ++c2) {
      if (row_paired[c2] || !m.get(c2, u)) continue;
      m.row_xor(c2, c);
      xor_into(values[c2], values[c]);
      if (--active_deg[c2] == 1) ready.push(static_cast<uint32_t>(c2));
    }
  };

  while (remaining > 0) {
    while (!ready.empty()) {
      const uint32_t c = ready.top();
      ready.pop();
      if (row_paired[c] || active_deg[c] != 1) continue;
      pair_up(c);
    }
    if (remaining == 0) break;

    // Stalled. Take the lowest-degree check still carrying active variables
    // (earliest on a tie) and inactivate its busiest variable.
    size_t best = n;
    uint32_t best_deg = UINT32_MAX;
    for (size_t c = 0; c < n; ++c) {
      if (row_paired[c] || active_deg[c] < 2) continue;
      if (active_deg[c] < best_deg) {
        best_deg = active_deg[c];
        best = c;
      }
    }
    uint32_t victim = k;
    if (best == n) {
      // Leftover variables outside every unpaired check can only go to the
      // dense phase.
      for (uint32_t v = 0; v < k; ++v)
        if (var_state[v] == 0) {
          victim = v;
          break;
        }
    } else {
      uint32_t best_cover = 0;
      const uint64_t* row = m.row(best);
      for (size_t w = 0; w < words; ++w) {
        uint64_t bits = row[w] & active_mask[w];
        while (bits) {
          const uint32_t v = static_cast<uint32_t>(w * 64 + std::countr_zero(bits));
          bits &= bits - 1;
          uint32_t cover = 0;
          for (size_t c2 = 0; c2 < n; ++c2)
            if (!row_paired[c2] && m.get(c2, v)) ++cover;
          if (cover > best_cover) {  // ascending scan keeps the smaller index on ties
            best_cover = cover;
            victim = v;
          }
        }
      }
    }
    var_state[victim] = 2;
    inactive.push_back(victim);
    --remaining;
    active_mask[victim / 64] &= ~(1ull << (victim % 64));
    for (size_t c2 = 0; c2 < n; ++c2) {
      if (row_paired[c2] || !m.get(c2, victim) || active_deg[c2] == 0) continue;
      if (--active_deg[c2] == 1) ready.push(static_cast<uint32_t>(c2));
    }
  }

  // Dense phase: the unpaired rows now reference inactivated variables only.
  const size_t ni = inactive.size();
  const size_t dwords = (ni + 63) / 64 + ((ni == 0) ? 1 : 0);
  std::vector<size_t> dense_rows;
  for (size_t c = 0; c < n; ++c)
    if (!row_paired[c]) dense_rows.push_back(c);
  BinaryMatrix d(dense_rows.size(), ni ? ni : 1);
  std::vector<Payload> drhs;
  drhs.reserve(dense_rows.size());
  for (size_t i = 0; i < dense_rows.size(); ++i) {
    for (size_t j = 0; j < ni; ++j)
      if (m.get(dense_rows[i], inactive[j])) d.set(i, j, true);
    drhs.push_back(values[dense_rows[i]]);
  }

  std::vector<size_t> pivot_row(ni, SIZE_MAX);
  std::vector<uint8_t> used(dense_rows.size(), 0);
  size_t drank = 0;
  for (size_t col = 0; col < ni; ++col) {
    size_t r = SIZE_MAX;
    for (size_t i = 0; i < dense_rows.size(); ++i)
      if (!used[i] && d.get(i, col)) {
        r = i;
        break;
      }
    if (r == SIZE_MAX) continue;
    used[r] = 1;
    pivot_row[col] = r;
    ++drank;
    for (size_t i = 0; i < dense_rows.size(); ++i) {
      if (i == r || !d.get(i, col)) continue;
      d.row_xor(i, r);
      xor_into(drhs[i], drhs[r]);
    }
  }

  DecodeReport rep;
  rep.symbols.assign(k, Payload(payload_size, 0));
  rep.rank = static_cast<uint32_t>(pairs.size() + drank);
  rep.inactivation_count = static_cast<uint32_t>(ni);
  rep.inactivated = inactive;
  std::vector<uint8_t> det(k, 0);
  for (size_t col = 0; col < ni; ++col) {
    if (pivot_row[col] == SIZE_MAX) continue;
    if (d.row_weight(pivot_row[col]) != 1) continue;  // tied to a free variable
    det[inactive[col]] = 1;
    rep.symbols[inactive[col]] = drhs[pivot_row[col]];
  }

  // Substitute back through the frozen rows. A paired variable resolves iff
  // its row's inactive support reduces to zero against the dense row space —
  // the supported combination is then forced even when individual
  // inactivated variables stay free.
  for (const auto& [c, u] : pairs) {
    std::vector<uint64_t> s(dwords, 0);
    for (size_t j = 0; j < ni; ++j)
      if (m.get(c, inactive[j])) s[j / 64] |= 1ull << (j % 64);
    Payload val = values[c];
    for (size_t col = 0; col < ni; ++col) {
      if (!(s[col / 64] >> (col % 64) & 1) || pivot_row[col] == SIZE_MAX) continue;
      const uint64_t* prow = d.row(pivot_row[col]);
      for (size_t w = 0; w < (ni + 63) / 64; ++w) s[w] ^= prow[w];
      xor_into(val, drhs[pivot_row[col]]);
    }
    bool zero = true;
    for (uint64_t w : s) zero = zero && w == 0;
    if (zero) {
      det[u] = 1;
      rep.symbols[u] = std::move(val);
    }
  }

  for (const auto& [c, u] : pairs)
    if (det[u]) rep.recovered_order.push_back(u);
  for (uint32_t v : inactive)
    if (det[v]) rep.recovered_order.push_back(v);
  for (uint32_t v = 0; v < k; ++v) {
    if (det[v])
      ++rep.recovered_count;
    else
      rep.unrecovered.push_back(v);
  }
  rep.status = rep.recovered_count == k ? DecodeStatus::Success : DecodeStatus::Stalled;
  return rep;
}

DecodeReport inactivation_decode(const CodeParams& p,
                                 const std::vector<EncodingSymbol>& received) {
  auto [checks, values] = expand_received(p, received);
  DecodeReport rep = inactivation_solve(p.k, checks, std::move(values));
  for (uint32_t v : rep.unrecovered) rep.symbols[v].assign(p.symbol_size, 0);
  return rep;
}

}  // namespace fountain

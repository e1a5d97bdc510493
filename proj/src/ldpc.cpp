#include "fountain/ldpc.hpp"

#include <numeric>
#include <queue>
#include <stdexcept>

#include "fountain/rng.hpp"

namespace fountain {

LdpcCode ldpc_build(uint32_t n, uint32_t l, uint32_t r, uint64_t seed) {
  if (n == 0 || l == 0 || r == 0)
    throw std::invalid_argument("ldpc_build: n, l, r must be positive");
  if (uint64_t(n) * l % r != 0)
    throw std::invalid_argument("ldpc_build: n*l must be divisible by r");
  const uint32_t m = static_cast<uint32_t>(uint64_t(n) * l / r);

  LdpcCode c;
  c.n = n;
  c.l = l;
  c.r = r;
  c.seed = seed;
  c.H = FieldMatrix(m, n, 2);

  const size_t sockets = size_t(n) * l;
  std::vector<uint32_t> perm(sockets);
  std::iota(perm.begin(), perm.end(), 0u);
  SplitMix rng(seed);
  for (size_t i = sockets - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.below(i + 1)]);

  for (size_t s = 0; s < sockets; ++s) {
    const uint32_t v = static_cast<uint32_t>(s / l);
    const uint32_t chk = perm[s] / r;
    if (c.H.get(chk, v))
      ++c.collapsed_edges;
    else
      c.H.set(chk, v, 1);
  }
  return c;
}

EraseResult ldpc_erase_decode(const LdpcCode& c, std::vector<Payload>& word,
                              std::vector<uint8_t>& known) {
  if (word.size() != c.n || known.size() != c.n)
    throw std::invalid_argument("ldpc_erase_decode: word length must be n");
  const size_t m = c.H.rows();
  std::vector<uint32_t> erased_deg(m, 0);
  std::vector<std::vector<uint32_t>> var_checks(c.n);
  size_t unknown = 0;
  size_t payload_size = 0;
  for (uint32_t v = 0; v < c.n; ++v)
    if (known[v]) payload_size = word[v].size();
  for (uint32_t v = 0; v < c.n; ++v) {
    if (known[v]) continue;
    ++unknown;
    for (size_t i = 0; i < m; ++i)
      if (c.H.get(i, v)) {
        ++erased_deg[i];
        var_checks[v].push_back(static_cast<uint32_t>(i));
      }
  }

  std::queue<uint32_t> ready;
  for (size_t i = 0; i < m; ++i)
    if (erased_deg[i] == 1) ready.push(static_cast<uint32_t>(i));

  while (!ready.empty() && unknown > 0) {
    const uint32_t i = ready.front();
    ready.pop();
    if (erased_deg[i] != 1) continue;
    uint32_t v = c.n;
    for (uint32_t j = 0; j < c.n; ++j)
      if (!known[j] && c.H.get(i, j)) {
        v = j;
        break;
      }
    Payload val(payload_size, 0);
    for (uint32_t j = 0; j < c.n; ++j) {
      if (j == v || !c.H.get(i, j)) continue;
      xor_into(val, word[j]);
    }
    word[v] = std::move(val);
    known[v] = 1;
    --unknown;
    for (uint32_t i2 : var_checks[v])
      if (--erased_deg[i2] == 1) ready.push(i2);
  }

  EraseResult res;
  for (uint32_t v = 0; v < c.n; ++v)
    if (!known[v]) res.residual.push_back(v);
  res.success = res.residual.empty();
  return res;
}

}  // namespace fountain

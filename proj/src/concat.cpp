#include "fountain/concat.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fountain/mldec.hpp"
#include "fountain/rng.hpp"

namespace fountain {
namespace {

uint64_t parse_u64_field(const std::string& v, const std::string& key) {
  size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (v.empty() || v[0] == '-' || pos != v.size())
    throw std::invalid_argument("precode spec: bad value for " + key + ": '" + v + "'");
  return x;
}

// Bridges intermediate coordinates and the underlying codeword. The message
// occupies intermediate slots 0..k-1 verbatim; parity (and, for LDPC, the
// structurally zero padding left over after the data block) fills the rest.
// pos[i] is the codeword column of intermediate i.
struct PrecodeCodec {
  uint32_t k = 0;
  uint32_t kprime = 0;
  PrecodeKind kind = PrecodeKind::None;

  std::optional<HammingCode> ham;
  std::vector<uint32_t> ham_zero_cols;  // shortened codeword columns, not intermediates

  std::optional<LdpcCode> ldpc;
  BinaryMatrix reduced;              // Gauss-Jordan form of the LDPC H
  std::vector<size_t> pivot_row_of;  // column -> reduced pivot row, SIZE_MAX if free

  std::vector<uint32_t> pos;
  std::vector<uint32_t> shortened;  // intermediates pinned to zero (LDPC only)

  std::vector<Payload> encode(const std::vector<Payload>& msg, uint32_t symbol_size) const;
  void fill(std::vector<Payload>& c, std::vector<uint8_t>& cknown, uint32_t symbol_size) const;
};

PrecodeCodec make_codec(uint32_t k, const PrecodeSpec& s) {
  PrecodeCodec pc;
  pc.k = k;
  pc.kind = s.kind;
  switch (s.kind) {
    case PrecodeKind::None: {
      pc.kprime = k;
      pc.pos.resize(k);
      std::iota(pc.pos.begin(), pc.pos.end(), 0u);
      return pc;
    }
    case PrecodeKind::Hamming: {
      pc.ham = hamming_build(s.hamming_r, s.hamming_extended);
      const uint32_t r = s.hamming_r;
      const uint32_t base = (1u << r) - 1;  // columns of the unextended code
      std::vector<uint32_t> nonpower;
      for (uint32_t j = 0; j < base; ++j)
        if (((j + 1) & j) != 0) nonpower.push_back(j);
      if (k > nonpower.size())
        throw std::invalid_argument("hamming precode: k exceeds the 2^r-1-r data columns");
      pc.kprime = k + r + (s.hamming_extended ? 1u : 0u);
      pc.pos.assign(nonpower.begin(), nonpower.begin() + k);
      for (uint32_t t = 0; t < r; ++t) pc.pos.push_back((1u << t) - 1);
      if (s.hamming_extended) pc.pos.push_back(base);
      pc.ham_zero_cols.assign(nonpower.begin() + k, nonpower.end());
      return pc;
    }
    case PrecodeKind::Ldpc: {
      pc.ldpc = ldpc_build(s.ldpc_n, s.ldpc_l, s.ldpc_r, s.ldpc_seed);
      const uint32_t n = s.ldpc_n;
      pc.kprime = n;
      BinaryMatrix h = pc.ldpc->H.to_binary();
      const size_t m = h.rows();
      pc.pivot_row_of.assign(n, SIZE_MAX);
      std::vector<uint8_t> used(m, 0);
      for (uint32_t col = 0; col < n; ++col) {
        size_t piv = SIZE_MAX;
        for (size_t row = 0; row < m; ++row)
          if (!used[row] && h.get(row, col)) {
            piv = row;
            break;
          }
        if (piv == SIZE_MAX) continue;
        used[piv] = 1;
        pc.pivot_row_of[col] = piv;
        for (size_t row = 0; row < m; ++row)
          if (row != piv && h.get(row, col)) h.row_xor(row, piv);
      }
      pc.reduced = std::move(h);
      std::vector<uint32_t> free_cols;
      for (uint32_t col = 0; col < n; ++col)
        if (pc.pivot_row_of[col] == SIZE_MAX) free_cols.push_back(col);
      if (k > free_cols.size())
        throw std::invalid_argument("ldpc precode: k exceeds the code dimension " +
                                    std::to_string(free_cols.size()));
      pc.pos.assign(free_cols.begin(), free_cols.begin() + k);
      std::vector<uint8_t> taken(n, 0);
      for (uint32_t col : pc.pos) taken[col] = 1;
      for (uint32_t col = 0; col < n; ++col)
        if (!taken[col]) pc.pos.push_back(col);
      for (uint32_t i = k; i < n; ++i)
        if (pc.pivot_row_of[pc.pos[i]] == SIZE_MAX) pc.shortened.push_back(i);
      return pc;
    }
  }
  throw std::logic_error("unreachable precode kind");
}

std::vector<Payload> PrecodeCodec::encode(const std::vector<Payload>& msg,
                                          uint32_t symbol_size) const {
  std::vector<Payload> z(kprime);
  if (kind == PrecodeKind::None) {
    z = msg;
    return z;
  }
  if (kind == PrecodeKind::Hamming) {
    const uint32_t r = ham->r;
    const uint32_t base = (1u << r) - 1;
    std::vector<Payload> word(ham->n, Payload(symbol_size, 0));
    for (uint32_t i = 0; i < k; ++i) word[pos[i]] = msg[i];
    // Row i holds exactly one power-of-two column, 2^(r-1-i), so each parity
    // is a direct XOR of the data columns in its row.
    for (uint32_t i = 0; i < r; ++i) {
      const uint32_t pcol = (1u << (r - 1 - i)) - 1;
      Payload val(symbol_size, 0);
      for (uint32_t j = 0; j < base; ++j)
        if (j != pcol && ham->H.get(i, j)) xor_into(val, word[j]);
      word[pcol] = std::move(val);
    }
    if (ham->extended) {
      Payload val(symbol_size, 0);
      for (uint32_t j = 0; j < base; ++j) xor_into(val, word[j]);
      word[base] = std::move(val);
    }
    for (uint32_t i = 0; i < kprime; ++i) z[i] = std::move(word[pos[i]]);
    return z;
  }
  const uint32_t n = ldpc->n;
  std::vector<Payload> word(n, Payload(symbol_size, 0));
  for (uint32_t i = 0; i < k; ++i) word[pos[i]] = msg[i];
  // A reduced pivot row references its pivot plus free columns only, so the
  // parities never depend on each other.
  for (uint32_t col = 0; col < n; ++col) {
    const size_t row = pivot_row_of[col];
    if (row == SIZE_MAX) continue;
    Payload val(symbol_size, 0);
    for (uint32_t f = 0; f < n; ++f)
      if (f != col && reduced.get(row, f)) xor_into(val, word[f]);
    word[col] = std::move(val);
  }
  for (uint32_t i = 0; i < kprime; ++i) z[i] = std::move(word[pos[i]]);
  return z;
}

void PrecodeCodec::fill(std::vector<Payload>& c, std::vector<uint8_t>& cknown,
                        uint32_t symbol_size) const {
  if (kind == PrecodeKind::None) return;
  bool complete = true;
  for (uint32_t i = 0; i < kprime; ++i)
    if (!cknown[i]) {
      complete = false;
      break;
    }
  if (complete) return;
  const uint32_t n = kind == PrecodeKind::Hamming ? ham->n : ldpc->n;
  std::vector<Payload> word(n, Payload(symbol_size, 0));
  std::vector<uint8_t> known(n, 0);
  for (uint32_t col : ham_zero_cols) known[col] = 1;
  for (uint32_t i = 0; i < kprime; ++i)
    if (cknown[i]) {
      word[pos[i]] = c[i];
      known[pos[i]] = 1;
    }
  if (kind == PrecodeKind::Hamming)
    hamming_erase_decode(*ham, word, known);
  else
    ldpc_erase_decode(*ldpc, word, known);
  for (uint32_t i = 0; i < kprime; ++i)
    if (!cknown[i] && known[pos[i]]) {
      c[i] = std::move(word[pos[i]]);
      cknown[i] = 1;
    }
}

// Adds mass * Binomial(n, q) over j in [0, jmax] into next[s + j]. Terms are
// walked outward from the mode with the pmf ratio recurrence and cut at a
// 1e-30 relative threshold, so the walk stays O(sqrt(n)) per state without
// underflowing for extreme q.
void binom_spread(std::vector<long double>& next, uint32_t s, long double mass, uint32_t n,
                  long double q, int64_t jmax, const std::vector<long double>& lf) {
  if (q <= 0.0L) {
    next[s] += mass;
    return;
  }
  if (q >= 1.0L) {
    if (static_cast<int64_t>(n) <= jmax) next[s + n] += mass;
    return;
  }
  int64_t mode = static_cast<int64_t>(floorl(static_cast<long double>(n + 1) * q));
  if (mode > static_cast<int64_t>(n)) mode = n;
  const long double lmode = lf[n] - lf[mode] - lf[n - mode] + mode * logl(q) +
                            (n - mode) * log1pl(-q);
  const long double tmode = expl(lmode);
  const long double thresh = tmode * 1e-30L;
  if (mode <= jmax) {
    long double t = tmode;
    int64_t j = mode;
    while (true) {
      next[s + j] += mass * t;
      if (j == static_cast<int64_t>(n) || j == jmax) break;
      t *= static_cast<long double>(n - j) / static_cast<long double>(j + 1) * q / (1.0L - q);
      ++j;
      if (t < thresh) break;
    }
  }
  long double t = tmode;
  for (int64_t j = mode; j > 0;) {
    t *= static_cast<long double>(j) / static_cast<long double>(n - j + 1) * (1.0L - q) / q;
    --j;
    if (t < thresh) break;
    if (j <= jmax) next[s + j] += mass * t;
  }
}

}  // namespace

PrecodeSpec parse_precode_spec(const std::string& text) {
  std::istringstream in(text);
  std::map<std::string, std::string> kv;
  std::string tok;
  while (in >> tok) {
    const size_t eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("precode spec: expected key=value, got '" + tok + "'");
    if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
      throw std::invalid_argument("precode spec: duplicate key '" + tok.substr(0, eq) + "'");
  }
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument(std::string("precode spec: missing ") + key);
    std::string v = std::move(it->second);
    kv.erase(it);
    return v;
  };
  PrecodeSpec s;
  const std::string type = take("type");
  if (type == "none") {
    s.kind = PrecodeKind::None;
  } else if (type == "hamming") {
    s.kind = PrecodeKind::Hamming;
    s.hamming_r = static_cast<uint32_t>(parse_u64_field(take("r"), "r"));
    if (auto it = kv.find("extended"); it != kv.end()) {
      const uint64_t e = parse_u64_field(it->second, "extended");
      if (e > 1) throw std::invalid_argument("precode spec: extended must be 0 or 1");
      s.hamming_extended = e == 1;
      kv.erase(it);
    }
  } else if (type == "ldpc") {
    s.kind = PrecodeKind::Ldpc;
    s.ldpc_n = static_cast<uint32_t>(parse_u64_field(take("n"), "n"));
    s.ldpc_l = static_cast<uint32_t>(parse_u64_field(take("l"), "l"));
    s.ldpc_r = static_cast<uint32_t>(parse_u64_field(take("r"), "r"));
    if (auto it = kv.find("seed"); it != kv.end()) {
      s.ldpc_seed = parse_u64_field(it->second, "seed");
      kv.erase(it);
    }
  } else {
    throw std::invalid_argument("precode spec: unknown type '" + type + "'");
  }
  if (!kv.empty())
    throw std::invalid_argument("precode spec: unexpected key '" + kv.begin()->first + "'");
  return s;
}

std::string format_precode_spec(const PrecodeSpec& s) {
  std::ostringstream out;
  switch (s.kind) {
    case PrecodeKind::None:
      out << "type=none";
      break;
    case PrecodeKind::Hamming:
      out << "type=hamming r=" << s.hamming_r << " extended=" << (s.hamming_extended ? 1 : 0);
      break;
    case PrecodeKind::Ldpc:
      out << "type=ldpc n=" << s.ldpc_n << " l=" << s.ldpc_l << " r=" << s.ldpc_r
          << " seed=" << s.ldpc_seed;
      break;
  }
  return out.str();
}

PrecodeSpec load_precode_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open precode file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_precode_spec(buf.str());
}

uint32_t intermediate_length(uint32_t k, const PrecodeSpec& s) {
  switch (s.kind) {
    case PrecodeKind::None:
      return k;
    case PrecodeKind::Hamming: {
      const uint32_t r = s.hamming_r;
      if (r < 2 || r > 30)
        throw std::invalid_argument("hamming precode: r must be in [2, 30]");
      const uint64_t capacity = ((1ull << r) - 1) - r;
      if (k == 0 || k > capacity)
        throw std::invalid_argument("hamming precode: k must be in [1, 2^r-1-r]");
      return k + r + (s.hamming_extended ? 1u : 0u);
    }
    case PrecodeKind::Ldpc: {
      if (s.ldpc_n == 0) throw std::invalid_argument("ldpc precode: n must be positive");
      if (k >= s.ldpc_n)
        throw std::invalid_argument("ldpc precode: k must be smaller than the block length n");
      return s.ldpc_n;
    }
  }
  throw std::logic_error("unreachable precode kind");
}

void ConcatParams::validate() const {
  if (k == 0) throw std::invalid_argument("ConcatParams: k must be positive");
  lt.validate();
  const uint32_t want = intermediate_length(k, precode);
  if (lt.k != want)
    throw std::invalid_argument("ConcatParams: lt.k is " + std::to_string(lt.k) +
                                " but the precode yields " + std::to_string(want) +
                                " intermediates");
}

bool gstar_degree_check(std::vector<uint32_t> degrees) {
  std::sort(degrees.begin(), degrees.end());
  for (size_t i = 0; i < degrees.size(); ++i)
    if (degrees[i] > i + 1) return false;
  return true;
}

uint64_t gstar_seed(uint64_t base_seed) { return derive_seed(base_seed, 0x47535452ull, 0); }

GstarGraph gstar_build(uint32_t k, const DegreeDistribution& dist, uint64_t seed) {
  if (k == 0) throw std::invalid_argument("gstar_build: k must be positive");
  GstarGraph g;
  g.k = k;
  g.degrees.assign(k, 1);
  if (k > 1) g.degrees[1] = 2;
  SplitMix rng(seed);
  if (k > 2) {
    const DegreeDistribution star = omega_star(dist);
    while (true) {
      for (uint32_t i = 2; i < k; ++i) g.degrees[i] = star.sample_degree(rng.uniform());
      if (gstar_degree_check(g.degrees)) break;
      if (++g.retries >= 1000)
        throw std::runtime_error(
            "gstar_build: degree check failed after 1000 redraws; the distribution is too "
            "heavy for this k");
    }
  }
  std::vector<uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](uint32_t a, uint32_t b) { return g.degrees[a] < g.degrees[b]; });
  std::vector<uint32_t> unrec(k);
  std::iota(unrec.begin(), unrec.end(), 0u);
  std::vector<uint32_t> rec;
  rec.reserve(k);
  g.checks.assign(k, {});
  // The i-th check in degree order has d <= i + 1, so it can always take one
  // fresh variable plus d - 1 already-placed ones; peeling replays this.
  for (uint32_t i = 0; i < k; ++i) {
    const uint32_t cid = order[i];
    const uint32_t d = g.degrees[cid];
    const size_t pick = rng.below(unrec.size());
    const uint32_t fresh = unrec[pick];
    unrec[pick] = unrec.back();
    unrec.pop_back();
    std::set<uint32_t> chosen;  // indices into rec, Floyd's sampler
    for (uint32_t j = i - (d - 1); j < i; ++j) {
      const uint32_t t = static_cast<uint32_t>(rng.below(j + 1));
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    auto& nb = g.checks[cid];
    nb.reserve(d);
    nb.push_back(fresh);
    for (uint32_t idx : chosen) nb.push_back(rec[idx]);
    std::sort(nb.begin(), nb.end());
    rec.push_back(fresh);
  }
  return g;
}

double gstar_feasibility(uint32_t k, const DegreeDistribution& dist) {
  if (k < 2) throw std::invalid_argument("gstar_feasibility: k must be at least 2");
  const uint32_t N = k - 2;
  if (N == 0) return 1.0;
  const uint32_t D = dist.dmax();
  std::vector<long double> ple(D + 1, 0.0L);  // P{draw <= d}
  for (uint32_t d = 1; d <= D; ++d)
    ple[d] = ple[d - 1] + static_cast<long double>(dist.prob(d));
  std::vector<long double> lf(N + 1, 0.0L);
  for (uint32_t i = 2; i <= N; ++i) lf[i] = lf[i - 1] + logl(static_cast<long double>(i));
  // dp[s] = P{exactly s of the N draws are >= d + 1 and no threshold above d
  // is violated}. The d_(i) <= i check is equivalent to demanding, for every
  // d >= 2, at most k - d + 1 degrees >= d; the fixed degrees 1 and 2 only
  // tighten d = 2 to S_2 <= k - 2, which N draws can never exceed.
  std::vector<long double> dp(N + 1, 0.0L), next(N + 1, 0.0L);
  dp[0] = 1.0L;
  for (uint32_t d = D; d >= 2; --d) {
    const int64_t cap = d == 2 ? static_cast<int64_t>(k) - 2
                               : std::max<int64_t>(0, static_cast<int64_t>(k) - d + 1);
    const int64_t b = std::min<int64_t>(cap, N);
    const long double q_raw =
        ple[d] > 0.0L ? static_cast<long double>(dist.prob(d)) / ple[d] : 0.0L;
    const long double q = std::min(1.0L, std::max(0.0L, q_raw));
    std::fill(next.begin(), next.end(), 0.0L);
    for (uint32_t s = 0; s <= N; ++s) {
      const long double mass = dp[s];
      if (mass <= 0.0L) continue;
      const int64_t jmax = b - static_cast<int64_t>(s);
      if (jmax < 0) continue;  // the bound at this level is already violated
      const uint32_t n = N - s;
      if (n == 0) {
        next[s] += mass;
        continue;
      }
      if (ple[d] <= 0.0L) continue;  // numerically unreachable state
      binom_spread(next, s, mass, n, q, jmax, lf);
    }
    dp.swap(next);
  }
  long double total = 0.0L;
  for (long double v : dp) total += v;
  return static_cast<double>(std::min(1.0L, std::max(0.0L, total)));
}

double gstar_feasibility_mc(uint32_t k, const DegreeDistribution& dist, uint32_t trials,
                            uint64_t seed) {
  if (k < 2) throw std::invalid_argument("gstar_feasibility_mc: k must be at least 2");
  if (trials == 0) throw std::invalid_argument("gstar_feasibility_mc: trials must be positive");
  SplitMix rng(seed);
  std::vector<uint32_t> degrees(k);
  uint64_t pass = 0;
  for (uint32_t t = 0; t < trials; ++t) {
    degrees[0] = 1;
    degrees[1] = 2;
    for (uint32_t i = 2; i < k; ++i) degrees[i] = dist.sample_degree(rng.uniform());
    if (gstar_degree_check(degrees)) ++pass;
  }
  return static_cast<double>(pass) / trials;
}

ConcatEncoder::ConcatEncoder(ConcatParams cp, std::vector<Payload> message)
    : cp_(std::move(cp)), message_(std::move(message)) {
  cp_.validate();
  if (message_.size() != cp_.k)
    throw std::invalid_argument("ConcatEncoder: message must have exactly k payloads");
  for (const Payload& p : message_)
    if (p.size() != cp_.lt.symbol_size)
      throw std::invalid_argument("ConcatEncoder: payload size mismatch");
  const PrecodeCodec codec = make_codec(cp_.k, cp_.precode);
  std::vector<Payload> c = codec.encode(message_, cp_.lt.symbol_size);
  if (!cp_.systematic) {
    z_ = std::move(c);
    return;
  }
  // Solve G* z = c; the construction guarantees peeling finishes.
  gstar_ = gstar_build(cp_.lt.k, *cp_.lt.dist, gstar_seed(cp_.lt.base_seed));
  DecodeReport rep = bp_peel(cp_.lt.k, gstar_->checks, std::move(c));
  if (rep.status != DecodeStatus::Success)
    throw std::logic_error("gstar graph failed to peel");
  z_ = std::move(rep.symbols);
}

EncodingSymbol ConcatEncoder::symbol(uint32_t esi) const {
  if (cp_.systematic && esi < cp_.k) return {esi, message_[esi]};
  return lt_encode(cp_.lt, esi, z_);
}

DecodeReport concat_decode(const ConcatParams& cp, const std::vector<EncodingSymbol>& received,
                           bool use_inactivation) {
  cp.validate();
  const uint32_t k = cp.k;
  const uint32_t kp = cp.lt.k;
  const uint32_t symbol_size = cp.lt.symbol_size;

  std::vector<size_t> order(received.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return received[a].esi < received[b].esi; });
  for (size_t i = 0; i < order.size(); ++i) {
    const EncodingSymbol& es = received[order[i]];
    if (i > 0 && received[order[i - 1]].esi == es.esi)
      throw std::invalid_argument("concat_decode: duplicate ESI " + std::to_string(es.esi));
    if (es.payload.size() != symbol_size)
      throw std::invalid_argument("concat_decode: payload size mismatch at ESI " +
                                  std::to_string(es.esi));
  }

  DecodeReport out;
  out.symbols.assign(k, Payload(symbol_size, 0));

  if (cp.systematic) {
    // With every systematic symbol in hand the message is literal; skip the
    // intermediate and precode stages entirely.
    size_t have = 0;
    for (size_t idx : order) have += received[idx].esi < k;
    if (have == k) {
      for (size_t idx : order) {
        const EncodingSymbol& es = received[idx];
        if (es.esi < k) out.symbols[es.esi] = es.payload;
      }
      out.status = DecodeStatus::Success;
      out.recovered_count = k;
      out.rank = k;
      out.recovered_order.resize(k);
      std::iota(out.recovered_order.begin(), out.recovered_order.end(), 0u);
      return out;
    }
  }

  const PrecodeCodec codec = make_codec(k, cp.precode);
  std::optional<GstarGraph> gs;
  if (cp.systematic) gs = gstar_build(kp, *cp.lt.dist, gstar_seed(cp.lt.base_seed));

  // Stage 1: solve for the intermediates. Shortened positions contribute
  // their structural zeros as equations: on a systematic stream codeword
  // position j relates to the intermediates through the G* row j, otherwise
  // the intermediates are the codeword and the row is a unit.
  std::vector<std::vector<uint32_t>> checks;
  std::vector<Payload> values;
  checks.reserve(codec.shortened.size() + order.size());
  values.reserve(checks.capacity());
  for (uint32_t s : codec.shortened) {
    checks.push_back(cp.systematic ? gs->checks[s] : std::vector<uint32_t>{s});
    values.emplace_back(symbol_size, 0);
  }
  for (size_t idx : order) {
    const EncodingSymbol& es = received[idx];
    checks.push_back(cp.systematic && es.esi < k ? gs->checks[es.esi]
                                                 : lt_neighbors(cp.lt, es.esi));
    values.push_back(es.payload);
  }
  DecodeReport st1 = use_inactivation ? inactivation_solve(kp, checks, std::move(values))
                                      : bp_peel(kp, checks, std::move(values));
  std::vector<uint8_t> zknown(kp, 1);
  for (uint32_t v : st1.unrecovered) zknown[v] = 0;

  // Stage 2: rebuild codeword knowledge from the solved intermediates plus
  // the received systematic payloads.
  std::vector<Payload> c(kp);
  std::vector<uint8_t> cknown(kp, 0);
  if (cp.systematic) {
    for (uint32_t j = 0; j < kp; ++j) {
      bool all = true;
      for (uint32_t v : gs->checks[j])
        if (!zknown[v]) {
          all = false;
          break;
        }
      if (!all) continue;
      Payload val(symbol_size, 0);
      for (uint32_t v : gs->checks[j]) xor_into(val, st1.symbols[v]);
      c[j] = std::move(val);
      cknown[j] = 1;
    }
    for (size_t idx : order) {
      const EncodingSymbol& es = received[idx];
      if (es.esi < k && !cknown[es.esi]) {
        c[es.esi] = es.payload;
        cknown[es.esi] = 1;
      }
    }
  } else {
    c = std::move(st1.symbols);
    for (uint32_t j = 0; j < kp; ++j) cknown[j] = zknown[j];
  }
  for (uint32_t s : codec.shortened)
    if (!cknown[s]) {
      c[s] = Payload(symbol_size, 0);
      cknown[s] = 1;
    }

  // Stage 3: the precode fills what the fountain left open.
  codec.fill(c, cknown, symbol_size);

  out.ripple_trace = std::move(st1.ripple_trace);
  out.release_trace = std::move(st1.release_trace);
  out.inactivation_count = st1.inactivation_count;
  out.inactivated = std::move(st1.inactivated);
  out.rank = st1.rank;
  for (uint32_t i = 0; i < k; ++i) {
    if (cknown[i]) {
      out.symbols[i] = std::move(c[i]);
      out.recovered_order.push_back(i);
      ++out.recovered_count;
    } else {
      out.unrecovered.push_back(i);
    }
  }
  out.status = out.recovered_count == k ? DecodeStatus::Success : DecodeStatus::Stalled;
  return out;
}

}  // namespace fountain

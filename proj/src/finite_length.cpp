#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "fountain/analysis.hpp"

namespace fountain {
namespace {

mpz_class binom(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

mpz_class fact(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

// Counts socket configurations of the regular (l,r) ensemble: N(v,t,u) is the
// number of matchings of v·l variable sockets into t fresh checks plus u
// leftover check sockets such that no nonempty subset of the v variables
// saturates every check it touches, T(v,t,u) the unrestricted count, and
// O(v,s,t,u) the count in which one fixed s-subset is the maximal saturated
// ("stopping") set.  All tables live per call.
struct EnsembleCount {
  uint32_t l;
  uint32_t r;
  size_t max_deg;
  std::vector<std::vector<mpz_class>> gpow;  // ((1+x)^r - 1 - rx)^j, truncated
  std::map<std::tuple<uint32_t, uint32_t, uint32_t>, mpz_class> memo;

  EnsembleCount(uint32_t l_, uint32_t r_, uint32_t n) : l(l_), r(r_), max_deg(size_t(n) * l) {
    gpow.push_back({mpz_class(1)});
  }

  const std::vector<mpz_class>& power(uint32_t j) {
    while (gpow.size() <= j) {
      const std::vector<mpz_class>& prev = gpow.back();
      const size_t cap = std::min(max_deg, prev.size() - 1 + r);
      std::vector<mpz_class> next(cap + 1, mpz_class(0));
      for (size_t a = 0; a < prev.size(); ++a) {
        if (prev[a] == 0) continue;
        for (uint32_t w = 2; w <= r; ++w) {
          const size_t dq = a + w;
          if (dq > cap) break;
          next[dq] += prev[a] * binom(r, w);
        }
      }
      gpow.push_back(std::move(next));
    }
    return gpow[j];
  }

  // coefficient of x^target in (1+x)^u * ((1+x)^r - 1 - rx)^j
  mpz_class coef(uint32_t u, uint32_t j, size_t target) {
    const std::vector<mpz_class>& p = power(j);
    mpz_class out = 0;
    for (size_t w = 0; w < p.size() && w <= target; ++w) {
      if (p[w] == 0) continue;
      out += p[w] * binom(u, static_cast<unsigned long>(target - w));
    }
    return out;
  }

  mpz_class T(uint32_t v, uint32_t t, uint32_t u) const {
    const unsigned long sockets = static_cast<unsigned long>(t) * r + u;
    const unsigned long picks = static_cast<unsigned long>(v) * l;
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), sockets, picks);
    return out * fact(picks);
  }

  mpz_class O(uint32_t v, uint32_t s, uint32_t t, uint32_t u) {
    const size_t sl = size_t(s) * l;
    mpz_class out = 0;
    for (uint32_t j = 0; j <= t && 2 * size_t(j) <= sl; ++j) {
      if (size_t(u) + size_t(j) * r < sl) continue;
      const mpz_class c = coef(u, j, sl);
      if (c == 0) continue;
      const uint32_t u2 = static_cast<uint32_t>(size_t(u) + size_t(j) * r - sl);
      out += binom(t, j) * c * N(v - s, t - j, u2);
    }
    return out * fact(static_cast<unsigned long>(sl));
  }

  mpz_class N(uint32_t v, uint32_t t, uint32_t u) {
    if (v == 0) return 1;
    const auto key = std::make_tuple(v, t, u);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    mpz_class out = T(v, t, u);
    for (uint32_t s = 1; s <= v; ++s) out -= binom(v, s) * O(v, s, t, u);
    memo.emplace(key, out);
    return out;
  }
};

}  // namespace

std::pair<mpq_class, mpq_class> ldpc_finite_length_exact(uint32_t n, uint32_t l, uint32_t r,
                                                         const mpq_class& gamma) {
  if (n == 0) throw std::invalid_argument("ldpc_finite_length: n must be positive");
  if (l == 0) throw std::invalid_argument("ldpc_finite_length: l must be positive");
  if (r < 2) throw std::invalid_argument("ldpc_finite_length: r must be at least 2");
  if ((static_cast<uint64_t>(n) * l) % r != 0)
    throw std::invalid_argument("ldpc_finite_length: n*l must be divisible by r");
  if (n > 64)
    throw std::invalid_argument(
        "ldpc_finite_length: n > 64 is out of range for the exact ensemble count; "
        "use a Monte Carlo estimate instead");
  if (gamma < 0 || gamma > 1)
    throw std::invalid_argument("ldpc_finite_length: gamma must lie in [0,1]");

  const uint32_t m = static_cast<uint32_t>((static_cast<uint64_t>(n) * l) / r);
  EnsembleCount ec(l, r, n);

  // binomial weights C(n,i) gamma^i (1-gamma)^(n-i), built incrementally
  std::vector<mpq_class> weight(n + 1);
  {
    const mpq_class g = gamma;
    const mpq_class h = 1 - gamma;
    std::vector<mpq_class> gp(n + 1), hp(n + 1);
    gp[0] = 1;
    hp[0] = 1;
    for (uint32_t i = 1; i <= n; ++i) {
      gp[i] = gp[i - 1] * g;
      hp[i] = hp[i - 1] * h;
    }
    for (uint32_t i = 0; i <= n; ++i)
      weight[i] = mpq_class(binom(n, i)) * gp[i] * hp[n - i];
  }

  mpq_class p_block = 0;
  mpq_class p_bit = 0;
  for (uint32_t i = 1; i <= n; ++i) {
    const mpz_class Ti = ec.T(i, m, 0);
    const mpz_class Ni = ec.N(i, m, 0);
    mpq_class chi(Ti - Ni, Ti);
    chi.canonicalize();
    p_block += weight[i] * chi;
    mpz_class ssum = 0;
    for (uint32_t s = 1; s <= i; ++s) ssum += binom(i, s) * s * ec.O(i, s, m, 0);
    mpq_class frac(ssum, Ti * n);
    frac.canonicalize();
    p_bit += weight[i] * frac;
  }
  return {p_block, p_bit};
}

LdpcFiniteLength ldpc_finite_length(uint32_t n, uint32_t l, uint32_t r, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("ldpc_finite_length: gamma must lie in [0,1]");
  const auto [pb, pbit] = ldpc_finite_length_exact(n, l, r, mpq_class(gamma));
  return {pb.get_d(), pbit.get_d()};
}

}  // namespace fountain

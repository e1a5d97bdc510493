#include "fountain/analysis.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fountain {
namespace {

double lchoose(uint64_t a, uint64_t b) {
  if (b > a) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(a) + 1.0) - std::lgamma(static_cast<double>(b) + 1.0) -
         std::lgamma(static_cast<double>(a - b) + 1.0);
}

// q^e as a double; exact for the power-of-two field orders.
double qpow(unsigned q, int64_t e) {
  if ((q & (q - 1)) == 0)
    return std::ldexp(1.0, static_cast<int>(std::countr_zero(q) * e));
  return std::pow(static_cast<double>(q), static_cast<double>(e));
}

void require_field(unsigned q) {
  if (q < 2) throw std::invalid_argument("field order must be at least 2");
}

}  // namespace

double full_rank_prob(uint32_t mx, uint32_t my, unsigned q) {
  if (mx == 0) throw std::invalid_argument("full_rank_prob: mx must be at least 1");
  require_field(q);
  if (my < mx) return 0.0;
  // Plain product: the factors are exact dyadics for q a power of two, which
  // keeps small cases bit-equal to the rational value.
  double p = 1.0;
  for (uint32_t i = 0; i < mx; ++i)
    p *= 1.0 - qpow(q, static_cast<int64_t>(i) - static_cast<int64_t>(my));
  return p;
}

BoundResult ml_failure_bounds(uint32_t mx, uint32_t my, unsigned q) {
  if (mx == 0) throw std::invalid_argument("ml_failure_bounds: mx must be at least 1");
  require_field(q);
  BoundResult r;
  if (my < mx) {
    r.lower = r.upper = 1.0;
    r.exact = 1.0;
    return r;
  }
  const int64_t diff = static_cast<int64_t>(mx) - static_cast<int64_t>(my);
  r.lower = qpow(q, diff - 1);
  r.upper = qpow(q, diff) / (static_cast<double>(q) - 1.0);
  double s = 0.0;
  for (uint32_t i = 0; i < mx; ++i)
    s += std::log1p(-qpow(q, static_cast<int64_t>(i) - static_cast<int64_t>(my)));
  r.exact = -std::expm1(s);  // accurate even when the failure is ~1e-150
  return r;
}

double symbol_ml_upper(uint32_t k, uint32_t n, const DegreeDistribution& d) {
  if (k == 0) throw std::invalid_argument("symbol_ml_upper: k must be at least 1");
  if (n == 0) throw std::invalid_argument("symbol_ml_upper: n must be at least 1");
  double total = 0.0;
  for (uint32_t l = 1; l <= k; ++l) {
    double inner = 0.0;
    for (uint32_t deg = 1; deg <= d.dmax(); ++deg) {
      const double w = d.prob(deg);
      if (w == 0.0 || deg > k) continue;
      const double denom = lchoose(k, deg);
      const uint32_t deven = deg - (deg % 2);
      double acc = 0.0;
      for (uint32_t s = 0; s <= std::min(l, deven); s += 2) {
        if (deg - s > k - l) continue;
        acc += std::exp(lchoose(l, s) + lchoose(k - l, deg - s) - denom);
      }
      inner += w * acc;
    }
    if (inner <= 0.0) continue;
    if (inner > 1.0) inner = 1.0;
    total += std::exp(lchoose(k - 1, l - 1) + n * std::log(inner));
  }
  return std::min(1.0, std::max(0.0, total));
}

BoundResult coverage_bounds(uint32_t k, uint32_t n, const DegreeDistribution& d) {
  if (k == 0) throw std::invalid_argument("coverage_bounds: k must be at least 1");
  const double a = d.avg_degree();
  if (!(a < k))
    throw std::invalid_argument("coverage_bounds: Omega'(1) must be smaller than k");
  BoundResult r;
  r.exact = std::pow(1.0 - a / k, static_cast<double>(n));
  r.lower = std::exp(-a * n / (static_cast<double>(k) - a));
  r.upper = std::exp(-a * n / static_cast<double>(k));
  return r;
}

EvolutionTrace and_or_evolution(const DegreeDistribution& d, double epsilon,
                                uint32_t max_iters) {
  if (!(d.avg_degree() > 0.0))
    throw std::invalid_argument("and_or_evolution: Omega'(1) must be positive");
  EvolutionTrace tr;
  double y = 1.0;
  tr.y.push_back(y);
  for (uint32_t it = 0; it < max_iters; ++it) {
    const double next = std::exp(-(1.0 + epsilon) * d.derivative_at(1.0 - y));
    tr.y.push_back(next);
    const bool done = std::fabs(next - y) < 1e-12;
    y = next;
    if (done) {
      tr.converged = true;
      break;
    }
  }
  tr.fixed_point = y;
  return tr;
}

double expected_ripple(const DegreeDistribution& d, double epsilon, double x, uint32_t k) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("expected_ripple: x must lie in [0,1]");
  return k * (x - std::exp(-(1.0 + epsilon) * d.derivative_at(1.0 - x)));
}

CheckResult check_distribution(const DegreeDistribution& d, uint32_t k, double epsilon,
                               double gamma, double dgamma) {
  if (k == 0) throw std::invalid_argument("check_distribution: k must be at least 1");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("check_distribution: gamma must lie in (0,1)");
  if (!(dgamma > 0.0))
    throw std::invalid_argument("check_distribution: dgamma must be positive");
  CheckResult res;
  const uint32_t points =
      static_cast<uint32_t>(std::floor((1.0 - gamma) / dgamma + 1e-9)) + 1;
  for (uint32_t i = 0; i < points; ++i) {
    const double x = i * dgamma;
    const double lhs = d.derivative_at(x);
    const double arg = 1.0 - x - std::sqrt(2.0 * (1.0 - x) / (k * std::numbers::pi));
    const double rhs = arg > 0.0 ? -std::log(arg) / (1.0 + epsilon)
                                 : std::numeric_limits<double>::infinity();
    // binding LP rows sit exactly on the constraint, so leave rounding room
    if (!(lhs >= rhs - 1e-9)) {
      res.pass = false;
      res.x = x;
      res.lhs = lhs;
      res.rhs = rhs;
      return res;
    }
  }
  return res;
}

double giant_component(double m) {
  if (!(m > 0.0)) throw std::invalid_argument("giant_component: m must be positive");
  if (m <= 1.0) return 0.0;
  // Terms t_i = (i^{i-1}/i!)(m e^{-m})^i via the ratio recurrence
  // t_{i+1}/t_i = (1 + 1/i)^{i-1} * m e^{-m}; near m = 1 decay is slow, so a
  // hard cap keeps the subcritical edge from spinning.
  const double mexp = m * std::exp(-m);
  double t = mexp;
  double sum = t;
  for (uint64_t i = 1; t >= 1e-16 && i < 20000000; ++i) {
    t *= std::exp((i - 1) * std::log1p(1.0 / i)) * mexp;
    sum += t;
  }
  return 1.0 - sum / m;
}

std::vector<double> modified_distribution(const DegreeDistribution& d, double phi) {
  if (!(phi >= 0.0 && phi <= 1.0))
    throw std::invalid_argument("modified_distribution: phi must lie in [0,1]");
  const uint32_t D = d.dmax();
  std::vector<double> out(D + 1, 0.0);
  for (uint32_t deg = 1; deg <= D; ++deg) {
    const double w = d.prob(deg);
    if (w == 0.0) continue;
    if (phi == 0.0) {
      out[deg] += w;
      continue;
    }
    if (phi == 1.0) {
      out[0] += w;
      continue;
    }
    for (uint32_t i = 0; i <= deg; ++i) {
      const double lt = lchoose(deg, i) + i * std::log1p(-phi) + (deg - i) * std::log(phi);
      if (lt < -700.0) continue;
      out[i] += w * std::exp(lt);
    }
  }
  return out;
}

namespace {

double concat_failure_rec(const std::vector<double>& p,
                          const std::vector<std::vector<double>>& q, uint32_t j,
                          double theta, double lsp_frac,
                          const std::vector<uint32_t>& n_sizes, double weight) {
  // theta accumulates s_{j+1}/n_{j+1} + ... + s_{P-1}/n_{P-1}.
  if (j == 1) {
    const double idx_real = n_sizes[0] * (1.0 - theta - lsp_frac);
    const int64_t idx = static_cast<int64_t>(std::floor(idx_real + 1e-9));
    if (idx < 0 || idx > static_cast<int64_t>(n_sizes[0])) return 0.0;
    return weight * (1.0 - q[0][static_cast<size_t>(idx)]);
  }
  const double limit_real = n_sizes[j - 1] * (1.0 - theta - lsp_frac);
  const int64_t limit = static_cast<int64_t>(std::floor(limit_real + 1e-9));
  double total = 0.0;
  for (int64_t s = 0; s <= limit && s <= static_cast<int64_t>(n_sizes[j - 1]); ++s)
    total += concat_failure_rec(p, q, j - 1, theta + static_cast<double>(s) / n_sizes[j - 1],
                                lsp_frac, n_sizes, weight * q[j - 1][static_cast<size_t>(s)]);
  return total;
}

}  // namespace

double concat_failure(const std::vector<double>& p,
                      const std::vector<std::vector<double>>& q_stages,
                      const std::vector<uint32_t>& n_sizes) {
  const size_t P = n_sizes.size();
  if (P == 0 || q_stages.size() != P)
    throw std::invalid_argument("concat_failure: need one q vector per stage");
  for (uint32_t n : n_sizes)
    if (n == 0) throw std::invalid_argument("concat_failure: stage sizes must be positive");
  const uint32_t nP = n_sizes.back();
  if (p.size() != static_cast<size_t>(nP) + 1)
    throw std::invalid_argument("concat_failure: p must have n_P + 1 entries");
  for (size_t i = 0; i < P; ++i)
    if (q_stages[i].size() != static_cast<size_t>(n_sizes[i]) + 1)
      throw std::invalid_argument("concat_failure: q vector " + std::to_string(i + 1) +
                                  " must have n_" + std::to_string(i + 1) + " + 1 entries");
  double psum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("concat_failure: p entries must lie in [0,1]");
    psum += v;
  }
  if (psum > 1.0 + 1e-9)
    throw std::invalid_argument("concat_failure: p sums to more than 1");
  for (const auto& q : q_stages)
    for (double v : q)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("concat_failure: q entries must lie in [0,1]");

  if (P == 1) {
    double total = 0.0;
    for (uint32_t l = 0; l <= nP; ++l) total += p[l] * (1.0 - q_stages[0][nP - l]);
    return total;
  }
  double total = 0.0;
  for (uint32_t l = 0; l <= nP; ++l) {
    if (p[l] == 0.0) continue;
    for (uint32_t sP = 0; sP + l <= nP; ++sP) {
      const double weight = p[l] * q_stages[P - 1][sP];
      if (weight == 0.0) continue;
      total += concat_failure_rec(p, q_stages, static_cast<uint32_t>(P - 1), 0.0,
                                  static_cast<double>(l + sP) / nP, n_sizes, weight);
    }
  }
  return total;
}

double repair_complexity(double mu_e, double mu_d, uint32_t k, uint32_t l_size) {
  if (l_size == 0) throw std::invalid_argument("repair_complexity: set size must be positive");
  return mu_d * static_cast<double>(k) / static_cast<double>(l_size) + mu_e;
}

double repair_copy_bound(const DegreeDistribution& d, double epsilon) {
  return (1.0 + epsilon) * d.avg_degree();
}

}  // namespace fountain

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fountain/dist.hpp"

namespace fountain {

struct BoundResult {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> exact;
};

// P{random my x mx matrix over GF(q) has rank mx} = prod_{i<mx} (1 - q^(i-my)).
// my < mx returns 0.
double full_rank_prob(uint32_t mx, uint32_t my, unsigned q);

// Dense-fountain ML failure: exact = 1 - full_rank_prob bracketed by
// [q^(mx-my-1), q^(mx-my)/(q-1)).
BoundResult ml_failure_bounds(uint32_t mx, uint32_t my, unsigned q);

// Upper bound on the per-symbol ML failure probability after n observations:
// sum_l C(k-1,l-1) * [ sum_d Omega_d * (sum of even-s C(l,s)C(k-l,d-s))/C(k,d) ]^n.
double symbol_ml_upper(uint32_t k, uint32_t n, const DegreeDistribution& d);

// Probability a fixed symbol stays uncovered by n draws: exact =
// (1 - Omega'(1)/k)^n between its two exponential brackets.
BoundResult coverage_bounds(uint32_t k, uint32_t n, const DegreeDistribution& d);

struct EvolutionTrace {
  std::vector<double> y;  // y_0 = 1 first
  double fixed_point = 1.0;
  bool converged = false;
};

// And-Or tree evolution of the unrecovered-root probability:
// y_{l+1} = exp(-(1+epsilon) * Omega'(1 - y_l)).
EvolutionTrace and_or_evolution(const DegreeDistribution& d, double epsilon,
                                uint32_t max_iters = 100000);

// k * (x - exp(-(1+epsilon) * Omega'(1-x))), the expected ripple size when an
// x fraction is still unrecovered. Negative values mean decoding has passed x.
double expected_ripple(const DegreeDistribution& d, double epsilon, double x, uint32_t k);

struct CheckResult {
  bool pass = true;
  // First failing grid point when !pass; rhs is +inf when the log argument
  // was nonpositive there.
  double x = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Verifies Omega'(x) >= -ln(1 - x - sqrt(2(1-x)/(k pi)))/(1+epsilon) on the
// grid x = i*dgamma over [0, 1-gamma].
CheckResult check_distribution(const DegreeDistribution& d, uint32_t k, double epsilon,
                               double gamma, double dgamma);

struct LpProblem {
  uint32_t F = 0;
  uint32_t M = 0;
  std::vector<std::vector<double>> A;  // M x F, A[i][j] = (i*dgamma)^j
  std::vector<double> b;               // b[i] = -rhs at grid point i
  std::vector<double> c;               // solution; c[j] <= 0, Omega_d = -c_{d-1}/d
};

struct DesignResult {
  DegreeDistribution dist;
  LpProblem lp;
};

// Minimum-Omega'(1) degree distribution satisfying the ripple constraint on
// the whole grid, via a dense two-phase simplex. Throws naming the binding
// row when infeasible; the returned distribution always passes
// check_distribution with the same parameters.
DesignResult design_distribution(uint32_t k, double epsilon, double gamma, double dgamma,
                                 uint32_t F);

struct LdpcFiniteLength {
  double p_block = 0.0;
  double p_bit = 0.0;
};

// Exact finite-length block/bit erasure probabilities of the (l,r)-regular
// ensemble under BP, via the stopping-set recursion evaluated in
// arbitrary-precision integers. Guarded to n <= 64.
LdpcFiniteLength ldpc_finite_length(uint32_t n, uint32_t l, uint32_t r, double gamma);
std::pair<mpq_class, mpq_class> ldpc_finite_length_exact(uint32_t n, uint32_t l, uint32_t r,
                                                         const mpq_class& gamma);

// Giant-component fraction phi(m) of a Poisson(m) random graph; 0 for m <= 1,
// otherwise 1 - (1/m) sum_i (i^{i-1}/i!) (m e^{-m})^i.
double giant_component(double m);

// Coefficients of Omega((1-phi)x + phi) by degree; index 0 (released mass)
// through dmax.
std::vector<double> modified_distribution(const DegreeDistribution& d, double phi);

// Failure probability of a P-stage concatenated code. p[l] is the chance the
// LT stage recovers exactly l of n_sizes[P-1] symbols; q_stages[i-1][s] is
// the chance stage i decodes s erasures. Sum limits are floored to integers.
double concat_failure(const std::vector<double>& p,
                      const std::vector<std::vector<double>>& q_stages,
                      const std::vector<uint32_t>& n_sizes);

// C_R(L) = mu_d * k / |L| + mu_e.
double repair_complexity(double mu_e, double mu_d, uint32_t k, uint32_t l_size);

// Per-symbol cost ceiling of the systematic-copy repair strategy.
double repair_copy_bound(const DegreeDistribution& d, double epsilon);

}  // namespace fountain

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fountain {

// A degree distribution Omega over {1..dmax}, tied to the message length k
// it was designed for. Probabilities are validated and the cumulative table
// is pinned to end at exactly 1 so sampling can never fall off the end.
class DegreeDistribution {
 public:
  // probs[d-1] = Omega_d. Renormalizes when the raw sum is within tol of 1,
  // rejects otherwise.
  DegreeDistribution(uint32_t k, std::vector<double> probs);

  uint32_t k() const { return k_; }
  uint32_t dmax() const { return static_cast<uint32_t>(probs_.size()); }
  double prob(uint32_t d) const;  // Omega_d, 0 outside [1, dmax]
  const std::vector<double>& probs() const { return probs_; }
  double cdf(uint32_t d) const { return cdf_[d - 1]; }

  double avg_degree() const;                 // Omega'(1)
  double derivative_at(double x) const;      // Omega'(x)
  double second_derivative_at(double x) const;

  // Smallest d with CDF(d) > u, u in [0,1).
  uint32_t sample_degree(double u) const;

  // Same shape retargeted to a different message length (k >= dmax).
  DegreeDistribution with_k(uint32_t k) const;

 private:
  uint32_t k_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

// Ideal Soliton: Omega_1 = 1/k, Omega_d = 1/(d(d-1)) for d = 2..k. k >= 2.
DegreeDistribution soliton(uint32_t k);

// Robust Soliton with R = c*ln(k/delta)*sqrt(k), spike at round(k/R),
// tau_i = R/(i*k) below the spike and R*ln(R/delta)/k at it; normalized by
// beta = sum(Omega + tau).
DegreeDistribution robust_soliton(uint32_t k, double c, double delta);

// The fixed reference distribution with dmax = 66 (raw coefficients sum to
// 1.001 and are renormalized). Targets k = dmax unless retargeted.
DegreeDistribution raptor_reference(uint32_t k = 66);

// Optimized finite-length tables for k = 4096 (eps 0.04) and k = 8192
// (eps 0.03); any other k is rejected.
DegreeDistribution table1_reference(uint32_t k);

enum class AsymptoticVariant { Online, Raptor };

// Truncated-Soliton family weighted per variant:
//   eta_1 = 1/F, eta_d = 1/(d(d-1)) for d = 2..F;
//   online: c_1 = (eps*F-1)/(1+eps), raptor: c_1 = eps*F/(1+eps),
//   c_d = (F-c_1)/(F-1) for d >= 2.
DegreeDistribution asymptotic_good(uint32_t F, double eps, AsymptoticVariant variant,
                                   uint32_t k = 0 /* default F */);

// Conditional distribution given degree >= 2: Omega*_d = Omega_d/(1-Omega_1).
// Requires Omega_1 < 1.
DegreeDistribution omega_star(const DegreeDistribution& d);

// Plain-text serialization:
//   k=<int>
//   dmax=<int>
//   <d> <prob>        (nonzero entries only, ascending d)
std::string write_distribution(const DegreeDistribution& d);
DegreeDistribution parse_distribution(std::istream& in);
DegreeDistribution load_distribution_file(const std::string& path);
void save_distribution_file(const DegreeDistribution& d, const std::string& path);

}  // namespace fountain

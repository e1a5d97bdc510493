#include "fountain/dist.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fountain {

namespace {
constexpr double kSumTol = 1e-9;
}

DegreeDistribution::DegreeDistribution(uint32_t k, std::vector<double> probs)
    : k_(k), probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("distribution: no entries");
  if (probs_.size() > k_) throw std::invalid_argument("distribution: dmax exceeds k");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("distribution: negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kSumTol)
    throw std::invalid_argument("distribution: probabilities sum to " + std::to_string(sum));
  for (double& p : probs_) p /= sum;
  cdf_.resize(probs_.size());
  double acc = 0.0;
  for (size_t i = 0; i < probs_.size(); ++i) {
    acc += probs_[i];
    cdf_[i] = acc;
  }
  cdf_.back() = 1.0;
}

double DegreeDistribution::prob(uint32_t d) const {
  if (d == 0 || d > probs_.size()) return 0.0;
  return probs_[d - 1];
}

double DegreeDistribution::avg_degree() const {
  double s = 0.0;
  for (size_t i = 0; i < probs_.size(); ++i) s += (double)(i + 1) * probs_[i];
  return s;
}

double DegreeDistribution::derivative_at(double x) const {
  // Omega'(x) = sum d * Omega_d * x^(d-1), evaluated by Horner from the top.
  double s = 0.0;
  for (size_t i = probs_.size(); i-- > 0;) s = s * x + (double)(i + 1) * probs_[i];
  return s;
}

double DegreeDistribution::second_derivative_at(double x) const {
  double s = 0.0;
  for (size_t i = probs_.size(); i-- > 1;) s = s * x + (double)(i + 1) * (double)i * probs_[i];
  return s;
}

uint32_t DegreeDistribution::sample_degree(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("sample_degree: u outside [0,1)");
  // binary search for the smallest d with cdf[d] > u
  size_t lo = 0, hi = cdf_.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (cdf_[mid] > u) hi = mid; else lo = mid + 1;
  }
  return static_cast<uint32_t>(lo + 1);
}

DegreeDistribution DegreeDistribution::with_k(uint32_t k) const {
  return DegreeDistribution(k, probs_);
}

DegreeDistribution soliton(uint32_t k) {
  if (k < 2) throw std::invalid_argument("soliton: k must be >= 2");
  std::vector<double> p(k, 0.0);
  p[0] = 1.0 / k;
  for (uint32_t d = 2; d <= k; ++d) p[d - 1] = 1.0 / ((double)d * (d - 1));
  return DegreeDistribution(k, std::move(p));
}

DegreeDistribution robust_soliton(uint32_t k, double c, double delta) {
  if (k < 2) throw std::invalid_argument("robust_soliton: k must be >= 2");
  if (!(c > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("robust_soliton: need c > 0 and delta in (0,1)");
  double R = c * std::log((double)k / delta) * std::sqrt((double)k);
  if (!(R > 1.0) || !((double)k / R > 1.0))
    throw std::invalid_argument("robust_soliton: R out of range for these parameters");
  uint32_t spike = (uint32_t)std::llround((double)k / R);
  if (spike < 1 || spike > k) throw std::invalid_argument("robust_soliton: spike outside [1,k]");
  std::vector<double> p(k, 0.0);
  p[0] = 1.0 / k;
  for (uint32_t d = 2; d <= k; ++d) p[d - 1] = 1.0 / ((double)d * (d - 1));
  // add tau, unnormalized
  for (uint32_t i = 1; i < spike; ++i) p[i - 1] += R / ((double)i * k);
  p[spike - 1] += R * std::log(R / delta) / k;
  double beta = 0.0;
  for (double v : p) beta += v;
  for (double& v : p) v /= beta;
  return DegreeDistribution(k, std::move(p));
}

DegreeDistribution raptor_reference(uint32_t k) {
  // 0.008x + 0.494x^2 + 0.166x^3 + 0.073x^4 + 0.083x^5 + 0.056x^8
  // + 0.037x^9 + 0.056x^19 + 0.025x^65 + 0.003x^66; raw sum 1.001.
  std::vector<double> p(66, 0.0);
  p[0] = 0.008; p[1] = 0.494; p[2] = 0.166; p[3] = 0.073; p[4] = 0.083;
  p[7] = 0.056; p[8] = 0.037; p[18] = 0.056; p[64] = 0.025; p[65] = 0.003;
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return DegreeDistribution(k, std::move(p));
}

DegreeDistribution table1_reference(uint32_t k) {
  std::vector<double> p;
  if (k == 4096) {
    p.assign(32, 0.0);
    p[0] = 0.01206279868062;
    p[1] = 0.48618222931140;
    p[2] = 0.14486030215468;
    p[3] = 0.11968155126998;
    p[4] = 0.03845536920060;
    p[7] = 0.03045905002768;
    p[8] = 0.08718444024457;
    p[31] = 0.08111425911047;
  } else if (k == 8192) {
    p.assign(35, 0.0);
    p[0] = 0.00859664884231;
    p[1] = 0.48800207839031;
    p[2] = 0.16243601073478;
    p[3] = 0.06926848659608;
    p[4] = 0.09460770077248;
    p[8] = 0.03973381508374;
    p[9] = 0.06397077147921;
    p[33] = 0.06652107350334;
    p[34] = 0.00686341459082;
  } else {
    throw std::invalid_argument("table1_reference: only k = 4096 or 8192 available");
  }
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return DegreeDistribution(k, std::move(p));
}

DegreeDistribution asymptotic_good(uint32_t F, double eps, AsymptoticVariant variant, uint32_t k) {
  if (F < 2) throw std::invalid_argument("asymptotic_good: F must be >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("asymptotic_good: eps must be > 0");
  double c1 = (variant == AsymptoticVariant::Online) ? (eps * F - 1.0) / (1.0 + eps)
                                                     : eps * F / (1.0 + eps);
  if (!(c1 > 0.0))
    throw std::invalid_argument("asymptotic_good: c_1 <= 0 (online variant needs eps*F > 1)");
  if (!(c1 < (double)F)) throw std::invalid_argument("asymptotic_good: c_1 >= F");
  double cd = ((double)F - c1) / ((double)F - 1.0);
  std::vector<double> p(F, 0.0);
  p[0] = c1 * (1.0 / F);
  for (uint32_t d = 2; d <= F; ++d) p[d - 1] = cd / ((double)d * (d - 1));
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return DegreeDistribution(k == 0 ? F : k, std::move(p));
}

DegreeDistribution omega_star(const DegreeDistribution& d) {
  double o1 = d.prob(1);
  if (!(o1 < 1.0)) throw std::invalid_argument("omega_star: distribution has all mass at degree 1");
  std::vector<double> p(d.dmax(), 0.0);
  for (uint32_t deg = 2; deg <= d.dmax(); ++deg) p[deg - 1] = d.prob(deg) / (1.0 - o1);
  return DegreeDistribution(d.k(), std::move(p));
}

std::string write_distribution(const DegreeDistribution& d) {
  std::ostringstream os;
  os << "k=" << d.k() << "\n" << "dmax=" << d.dmax() << "\n";
  char buf[64];
  for (uint32_t deg = 1; deg <= d.dmax(); ++deg) {
    if (d.prob(deg) == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%u %.17g\n", deg, d.prob(deg));
    os << buf;
  }
  return os.str();
}

DegreeDistribution parse_distribution(std::istream& in) {
  std::string line;
  uint32_t k = 0, dmax = 0;
  if (!std::getline(in, line) || line.rfind("k=", 0) != 0)
    throw std::invalid_argument("distribution file: expected k=<int> on line 1");
  k = static_cast<uint32_t>(std::stoul(line.substr(2)));
  if (!std::getline(in, line) || line.rfind("dmax=", 0) != 0)
    throw std::invalid_argument("distribution file: expected dmax=<int> on line 2");
  dmax = static_cast<uint32_t>(std::stoul(line.substr(5)));
  if (dmax == 0) throw std::invalid_argument("distribution file: dmax must be positive");
  std::vector<double> p(dmax, 0.0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    uint32_t d;
    double v;
    if (!(ls >> d >> v)) throw std::invalid_argument("distribution file: bad entry line: " + line);
    if (d < 1 || d > dmax) throw std::invalid_argument("distribution file: degree out of range");
    p[d - 1] = v;
  }
  return DegreeDistribution(k, std::move(p));
}

DegreeDistribution load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open distribution file: " + path);
  return parse_distribution(in);
}

void save_distribution_file(const DegreeDistribution& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write distribution file: " + path);
  out << write_distribution(d);
}

}  // namespace fountain

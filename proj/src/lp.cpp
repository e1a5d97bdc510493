#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fountain/analysis.hpp"

namespace fountain {
namespace {

constexpr double kReducedTol = 1e-9;  // entering threshold on reduced costs
constexpr double kPivotFloor = 1e-7;  // smallest admissible pivot element
constexpr double kPhase1Tol = 1e-7;

// min cost.x subject to row_i . x (>= | <=) b_i, x >= 0, all b_i >= 0.
// Dense two-phase tableau with Bland's rule.
struct DenseLp {
  size_t n = 0;
  std::vector<std::vector<double>> rows;
  std::vector<double> b;
  std::vector<int> dir;  // +1 for >=, -1 for <=
  std::vector<double> cost;

  struct Out {
    bool feasible = true;
    std::vector<double> x;
    size_t bad_row = 0;  // a row whose artificial stayed basic when infeasible
  };

  Out solve() const;
};

DenseLp::Out DenseLp::solve() const {
  const size_t m = rows.size();
  size_t nart = 0;
  for (int d : dir) nart += d > 0;
  const size_t art0 = n + m;
  const size_t total = n + m + nart;

  std::vector<std::vector<double>> t(m, std::vector<double>(total + 1, 0.0));
  std::vector<size_t> basis(m);
  std::vector<size_t> art_row(nart);
  {
    size_t a = 0;
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < n; ++j) t[i][j] = rows[i][j];
      t[i][total] = b[i];
      if (dir[i] < 0) {
        t[i][n + i] = 1.0;
        basis[i] = n + i;
      } else {
        t[i][n + i] = -1.0;
        t[i][art0 + a] = 1.0;
        basis[i] = art0 + a;
        art_row[a] = i;
        ++a;
      }
    }
  }

  std::vector<double> z(total + 1, 0.0);
  std::vector<char> blocked(total, 0);

  auto pivot = [&](size_t pr, size_t pc) {
    const double pv = t[pr][pc];
    for (double& v : t[pr]) v /= pv;
    for (size_t i = 0; i < m; ++i) {
      if (i == pr) continue;
      const double f = t[i][pc];
      if (f == 0.0) continue;
      for (size_t j = 0; j <= total; ++j) t[i][j] -= f * t[pr][j];
    }
    const double f = z[pc];
    if (f != 0.0)
      for (size_t j = 0; j <= total; ++j) z[j] -= f * t[pr][j];
    basis[pr] = pc;
  };

  // Reduced costs are rebuilt from the basis periodically; the incremental
  // update drifts over hundreds of pivots.
  std::vector<double> phase_cost(total, 0.0);
  auto rebuild_z = [&]() {
    for (size_t j = 0; j < total; ++j) z[j] = phase_cost[j];
    z[total] = 0.0;
    for (size_t i = 0; i < m; ++i) {
      const double cb = phase_cost[basis[i]];
      if (cb == 0.0) continue;
      for (size_t j = 0; j <= total; ++j) z[j] -= cb * t[i][j];
    }
  };

  auto run = [&]() {
    for (uint32_t iter = 0; iter < 200000; ++iter) {
      if (iter > 0 && iter % 64 == 0) rebuild_z();
      size_t pr = m, pc = total;
      for (size_t j = 0; j < total; ++j) {
        if (blocked[j] || z[j] >= -kReducedTol) continue;
        pc = j;  // Bland: smallest improving index with a usable pivot
        size_t cand = m;
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < m; ++i) {
          if (t[i][pc] <= kPivotFloor) continue;  // refuse noise pivots
          const double ratio = std::max(t[i][total], 0.0) / t[i][pc];
          if (ratio < best - 1e-15 ||
              (ratio < best + 1e-15 && (cand == m || basis[i] < basis[cand]))) {
            best = ratio;
            cand = i;
          }
        }
        if (cand != m) {
          pr = cand;
          break;
        }
      }
      if (pr == m) return;  // optimal, or no numerically safe pivot remains
      pivot(pr, pc);
    }
    throw std::runtime_error("lp: iteration cap hit");
  };

  // Phase 1: drive the artificials to zero.
  if (nart > 0) {
    for (size_t a = 0; a < nart; ++a) phase_cost[art0 + a] = 1.0;
    rebuild_z();
    run();
    double art_sum = 0.0;
    for (size_t i = 0; i < m; ++i)
      if (basis[i] >= art0) art_sum += std::max(t[i][total], 0.0);
    if (art_sum > kPhase1Tol) {
      Out out;
      out.feasible = false;
      out.bad_row = 0;
      for (size_t i = 0; i < m; ++i)
        if (basis[i] >= art0 && t[i][total] > kPhase1Tol) {
          out.bad_row = i;
          break;
        }
      return out;
    }
    // Kick lingering zero-valued artificials out of the basis when possible.
    for (size_t i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      size_t pc = total;
      for (size_t j = 0; j < art0; ++j)
        if (std::fabs(t[i][j]) > kPivotFloor) {
          pc = j;
          break;
        }
      if (pc != total) pivot(i, pc);
    }
    for (size_t a = 0; a < nart; ++a) blocked[art0 + a] = 1;
  }

  // Phase 2: the real objective under the phase-1 basis.
  std::fill(phase_cost.begin(), phase_cost.end(), 0.0);
  for (size_t j = 0; j < n; ++j) phase_cost[j] = cost[j];
  rebuild_z();
  run();

  Out out;
  out.x.assign(n, 0.0);
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = t[i][total];
  return out;
}

}  // namespace

DesignResult design_distribution(uint32_t k, double epsilon, double gamma, double dgamma,
                                 uint32_t F) {
  if (k == 0) throw std::invalid_argument("design_distribution: k must be at least 1");
  if (F < 2) throw std::invalid_argument("design_distribution: F must be at least 2");
  if (F > k) throw std::invalid_argument("design_distribution: F must not exceed k");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("design_distribution: gamma must lie in (0,1)");
  if (!(dgamma > 0.0))
    throw std::invalid_argument("design_distribution: dgamma must be positive");

  const uint32_t M = static_cast<uint32_t>(std::floor((1.0 - gamma) / dgamma + 1e-9)) + 1;
  LpProblem lp;
  lp.F = F;
  lp.M = M;
  lp.A.assign(M, std::vector<double>(F, 0.0));
  lp.b.assign(M, 0.0);

  std::vector<double> rhs(M, 0.0);
  for (uint32_t i = 0; i < M; ++i) {
    const double x = i * dgamma;
    double pw = 1.0;
    for (uint32_t j = 0; j < F; ++j) {
      lp.A[i][j] = pw;
      pw *= x;
    }
    const double arg = 1.0 - x - std::sqrt(2.0 * (1.0 - x) / (k * std::numbers::pi));
    if (!(arg > 0.0))
      throw std::runtime_error("design_distribution: infeasible at grid row " +
                               std::to_string(i) + " (x = " + std::to_string(x) +
                               "): ripple bound has no finite right-hand side");
    rhs[i] = -std::log(arg) / (1.0 + epsilon);
    lp.b[i] = -rhs[i];
  }

  // Variables u_d = d * Omega_d >= 0; the normalization equality is a pair of
  // inequalities. The grid rows are tightened by a margin so that the
  // renormalized solution still clears the exact (unmargined) check; when the
  // tableau's accumulated roundoff exceeds the margin, the solve is repeated
  // with a wider one. The widening is well under the LP's own scale, so the
  // achieved objective is unaffected at any digit that matters.
  constexpr double kEqTol = 1e-9;
  std::vector<double> norm(F);
  for (uint32_t j = 0; j < F; ++j) norm[j] = 1.0 / (j + 1.0);

  std::string last_error;
  for (double margin = 1e-6; margin <= 1.1e-3; margin *= 10.0) {
    DenseLp prob;
    prob.n = F;
    prob.cost.assign(F, 1.0);
    for (uint32_t i = 0; i < M; ++i) {
      prob.rows.push_back(lp.A[i]);
      prob.b.push_back(rhs[i] + margin);
      prob.dir.push_back(+1);
    }
    prob.rows.push_back(norm);
    prob.b.push_back(1.0 + kEqTol);
    prob.dir.push_back(-1);
    prob.rows.push_back(norm);
    prob.b.push_back(1.0 - kEqTol);
    prob.dir.push_back(+1);
    for (uint32_t j = 0; j < F; ++j) {
      std::vector<double> row(F, 0.0);
      row[j] = 1.0;
      prob.rows.push_back(std::move(row));
      prob.b.push_back(j + 1.0);
      prob.dir.push_back(-1);
    }

    const DenseLp::Out out = prob.solve();
    if (!out.feasible) {
      last_error = "design_distribution: LP infeasible; binding row " +
                   std::to_string(out.bad_row);
      if (out.bad_row < M)
        last_error += " (grid x = " + std::to_string(out.bad_row * dgamma) + ")";
      else
        last_error += " (normalization)";
      continue;
    }

    std::vector<double> probs(F, 0.0);
    double sum = 0.0;
    for (uint32_t j = 0; j < F; ++j) {
      probs[j] = std::max(0.0, out.x[j]) / (j + 1.0);
      sum += probs[j];
    }
    if (!(sum > 0.5)) {
      last_error = "design_distribution: degenerate LP solution";
      continue;
    }
    for (double& v : probs) v /= sum;

    DesignResult res{DegreeDistribution(k, std::move(probs)), lp};
    const CheckResult chk = check_distribution(res.dist, k, epsilon, gamma, dgamma);
    if (!chk.pass) {
      last_error = "design_distribution: solution failed its own check at x = " +
                   std::to_string(chk.x);
      continue;
    }
    res.lp.c.assign(F, 0.0);
    for (uint32_t j = 0; j < F; ++j) res.lp.c[j] = -(j + 1.0) * res.dist.prob(j + 1);
    return res;
  }
  throw std::runtime_error(last_error);
}

}  // namespace fountain

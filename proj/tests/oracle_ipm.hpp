// Test-only brute-force modulus oracle, independent of the production solver:
// enumerate the whole family, then minimize sum rho^p subject to every curve
// constraint with a dense log-barrier interior-point method. Only suitable
// for small covers (the acceptance gate uses it up to 12 pieces).
#ifndef CONFDIM_TESTS_ORACLE_IPM_HPP
#define CONFDIM_TESTS_ORACLE_IPM_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "confdim/curves.hpp"

namespace oracle_ipm {

// Dense symmetric positive definite solve via Cholesky.
inline std::vector<double> spd_solve(std::vector<double> A, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k)
      for (int i = j; i < n; ++i) A[i * n + j] -= A[i * n + k] * A[j * n + k];
    const double d = A[j * n + j];
    if (!(d > 0)) throw std::runtime_error("oracle: matrix not positive definite");
    const double root = std::sqrt(d);
    for (int i = j; i < n; ++i) A[i * n + j] /= root;
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) b[i] -= A[i * n + k] * b[k];
    b[i] /= A[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) b[i] -= A[k * n + i] * b[k];
    b[i] /= A[i * n + i];
  }
  return b;
}

struct OracleResult {
  double value = 0;
  std::vector<double> rho;
};

// Minimize sum rho^p subject to sum_{s in curve} rho_s >= 1 for every curve,
// rho >= 0 (kept strictly interior by the barrier).
inline OracleResult brute_force_modulus(const std::vector<std::vector<int>>& supports,
                                        int n_pieces, double p) {
  if (supports.empty()) return {0.0, std::vector<double>(n_pieces, 0.0)};
  const int m = static_cast<int>(supports.size());
  const int n = n_pieces;
  std::vector<double> rho(n, 2.0);  // strictly feasible start

  auto lengths = [&](const std::vector<double>& x) {
    std::vector<double> len(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int s : supports[i]) len[i] += x[s];
    return len;
  };

  double t = 1.0;
  const double mu = 8.0;
  const int total_constraints = m + n;
  while (total_constraints / t > 1e-12) {
    // Newton iterations on t*f + barrier.
    for (int it = 0; it < 80; ++it) {
      const std::vector<double> len = lengths(rho);
      std::vector<double> grad(n, 0.0);
      std::vector<double> hess(static_cast<size_t>(n) * n, 0.0);
      for (int s = 0; s < n; ++s) {
        grad[s] = t * p * std::pow(rho[s], p - 1.0) - 1.0 / rho[s];
        hess[s * n + s] =
            t * p * (p - 1.0) * std::pow(rho[s], p - 2.0) + 1.0 / (rho[s] * rho[s]);
      }
      for (int i = 0; i < m; ++i) {
        const double slack = len[i] - 1.0;
        for (int a : supports[i]) {
          grad[a] -= 1.0 / slack;
          for (int b : supports[i]) hess[a * n + b] += 1.0 / (slack * slack);
        }
      }
      std::vector<double> step = spd_solve(hess, grad);
      double decrement = 0;
      for (int s = 0; s < n; ++s) decrement += grad[s] * step[s];
      if (decrement <= 1e-24) break;

      double alpha = 1.0;
      for (int bt = 0; bt < 60; ++bt) {
        std::vector<double> cand(rho);
        bool interior = true;
        for (int s = 0; s < n && interior; ++s) {
          cand[s] -= alpha * step[s];
          if (cand[s] <= 0) interior = false;
        }
        if (interior) {
          for (double l : lengths(cand))
            if (l <= 1.0) {
              interior = false;
              break;
            }
        }
        if (interior) {
          double f0 = 0, f1 = 0;
          for (int s = 0; s < n; ++s) {
            f0 += t * std::pow(rho[s], p) - std::log(rho[s]);
            f1 += t * std::pow(cand[s], p) - std::log(cand[s]);
          }
          for (double l : lengths(rho)) f0 -= std::log(l - 1.0);
          for (double l : lengths(cand)) f1 -= std::log(l - 1.0);
          if (f1 <= f0 - 0.25 * alpha * decrement) {
            rho = cand;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (decrement < 1e-18) break;
    }
    t *= mu;
  }

  OracleResult out;
  out.rho = rho;
  for (double w : rho) out.value += std::pow(w, p);
  return out;
}

// Full enumeration wrapper: every simple member chain up to the cover size.
inline OracleResult brute_force_modulus(const confdim::Family& family, double p) {
  const int n = family.cover().piece_count();
  std::vector<std::vector<int>> supports;
  for (const confdim::CombCurve& c : confdim::enumerate_small(family, n, 2000000))
    supports.push_back(c.support);
  return brute_force_modulus(supports, n, p);
}

} // namespace oracle_ipm

#endif

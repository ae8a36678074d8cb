#pragma once

// Shifted Jacobi polynomials R_n^(a,b)(x) = P_n^(a,b)(2x - 1) on [0, 1],
// orthogonal with respect to w(x) = (1 - x)^a x^b.

#include <cmath>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

namespace detail {
template <class Real>
void check_jacobi_params(const Real& alpha, const Real& beta) {
  if (!(alpha > Real(-1)) || !(beta > Real(-1))) {
    throw DomainError("shifted_jacobi: alpha and beta must exceed -1");
  }
}
}  // namespace detail

/// Values R_0 .. R_n at x, by the three-term recurrence.
template <class Real>
std::vector<Real> shifted_jacobi_all(const Real& alpha, const Real& beta, int n, const Real& x) {
  detail::check_jacobi_params(alpha, beta);
  std::vector<Real> out;
  out.reserve(n + 1);
  const Real t = Real(2) * x - Real(1);
  out.emplace_back(1);
  if (n == 0) return out;
  const Real ab = alpha + beta;
  out.push_back((alpha + Real(1)) + (ab + Real(2)) * (t - Real(1)) / Real(2));
  const Real a2b2 = alpha * alpha - beta * beta;
  for (int k = 2; k <= n; ++k) {
    const Real kk(k);
    const Real s = Real(2) * kk + ab;  // 2k + a + b
    const Real c1 = Real(2) * kk * (kk + ab) * (s - Real(2));
    const Real c2 = (s - Real(1)) * (s * (s - Real(2)) * t + a2b2);
    const Real c3 = Real(2) * (kk + alpha - Real(1)) * (kk + beta - Real(1)) * s;
    out.push_back((c2 * out[k - 1] - c3 * out[k - 2]) / c1);
  }
  return out;
}

template <class Real>
Real shifted_jacobi(const Real& alpha, const Real& beta, int n, const Real& x) {
  if (n < 0) throw DomainError("shifted_jacobi: degree must be nonnegative");
  return shifted_jacobi_all(alpha, beta, n, x).back();
}

inline double shifted_jacobi(double alpha, double beta, int n, double x) {
  return shifted_jacobi<double>(alpha, beta, n, x);
}

/// Squared norm eta_n = int_0^1 w R_n^2 dx.
template <class Real>
Real jacobi_eta(const Real& alpha, const Real& beta, int n) {
  using std::exp;
  using std::lgamma;
  detail::check_jacobi_params(alpha, beta);
  const Real one(1);
  if (n == 0) {
    return exp(lgamma(alpha + one) + lgamma(beta + one) - lgamma(alpha + beta + Real(2)));
  }
  const Real nn(n);
  const Real log_ratio = lgamma(nn + alpha + one) + lgamma(nn + beta + one) - lgamma(nn + one) -
                         lgamma(nn + alpha + beta + one);
  return exp(log_ratio) / (Real(2) * nn + alpha + beta + one);
}

}  // namespace hmt
